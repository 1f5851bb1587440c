"""Target distributions for the sampler experiments."""
from .gaussian import (
    GaussianSpec,
    GaussianTarget,
    gaussian_log_density,
    spherical,
    diagonal,
    full,
    ill_conditioned_diagonal,
    ill_conditioned_full,
)
from .mixture import MixtureSpec, MixtureTarget, mixture_log_density, bimodal_mixture
from .gp import (
    GpHyper,
    GpClassificationModel,
    GpLatentTarget,
    build_gp_kernel,
    gp_latent_log_density,
    gp_hyper_conditional,
    hyper_log_conditional,
    hyper_log_prior,
    misclassifying_start,
)
from .election import ElectionDataset, load_election_csv

__all__ = [
    'GaussianSpec',
    'GaussianTarget',
    'gaussian_log_density',
    'spherical',
    'diagonal',
    'full',
    'ill_conditioned_diagonal',
    'ill_conditioned_full',
    'MixtureSpec',
    'MixtureTarget',
    'mixture_log_density',
    'bimodal_mixture',
    'GpHyper',
    'GpClassificationModel',
    'GpLatentTarget',
    'build_gp_kernel',
    'gp_latent_log_density',
    'gp_hyper_conditional',
    'hyper_log_conditional',
    'hyper_log_prior',
    'misclassifying_start',
    'ElectionDataset',
    'load_election_csv',
]
