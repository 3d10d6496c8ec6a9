"""Hypergeometric character sums, their Frobenius spectra, the matching
differential operators and the p-adic estimates behind them."""
from .cyclotomic import CycInt, cyc_arith, cyc_embed, cyc_lift
from .finite_field import AddChar, FieldCtx, FqElem, MultChar, char_eval, char_pullback, extend, field_create
from .hypersum import (
    BudgetError,
    HypSpec,
    SpecError,
    hyp_sum_convolved,
    hyp_sum_direct,
    trace_normalizations,
)
from .padic import PiAdicCtx, PadicNumber, PrecisionError, dwork_theta, teichmuller
from .spectrum import SpectrumReport, purity_check
from .weyl import OpContext, WeylOp, hyp_operator

__version__ = "0.1.0"
