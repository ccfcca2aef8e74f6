"""Tradeoff analysis of MIMO block-fading channels with causal or predictive,
possibly mismatched, transmitter channel knowledge."""

from .model import (ChannelConfig, CsitSpec, RatePoint, TradeoffCurve,
                    dmt_uniform, singleton_bound, singleton_exponent)
from .dmt import dmt_causal, dmt_causal_vector, dmt_predictive
from .rdt import rdt_causal, rdt_predictive

__all__ = [
    "ChannelConfig", "CsitSpec", "RatePoint", "TradeoffCurve",
    "dmt_uniform", "singleton_bound", "singleton_exponent",
    "dmt_causal", "dmt_causal_vector", "dmt_predictive",
    "rdt_causal", "rdt_predictive",
]
