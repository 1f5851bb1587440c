"""Simplicial sampler: multiproposal MCMC by random simplex rotation."""

__version__ = "0.1.0"
