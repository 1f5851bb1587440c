"""Simplicial, random walk, multiple-try and slice samplers."""
from .adaptation import AdaptationState, new_adaptation, adapt_edge_length, adapt_covariance, update_adaptation
from .simplicial import (
    SimplicialConfig,
    ExtraDimensionalProposal,
    selection_probabilities,
    select_index,
    propose_simplex,
    propose_extra_dimensional,
    simplicial_step,
    extra_dimensional_step,
)
from .baselines import rwm_step, mtm_step
from .slice import slice_step_univariate
from .kernels import KernelSpec, SimplicialKernel, RandomWalkKernel, MultipleTryKernel, build_kernel
from .chain import run_chain

__all__ = [
    'AdaptationState',
    'new_adaptation',
    'adapt_edge_length',
    'adapt_covariance',
    'update_adaptation',
    'SimplicialConfig',
    'ExtraDimensionalProposal',
    'selection_probabilities',
    'select_index',
    'propose_simplex',
    'propose_extra_dimensional',
    'simplicial_step',
    'extra_dimensional_step',
    'rwm_step',
    'mtm_step',
    'slice_step_univariate',
    'KernelSpec',
    'SimplicialKernel',
    'RandomWalkKernel',
    'MultipleTryKernel',
    'build_kernel',
    'run_chain',
]
