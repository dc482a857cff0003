"""Scalar-generic SE(3) primitives with exact forward-mode Hessians."""

from .basis import Basis, SBasisEval, eval_basis, eval_basis_naive_theta
from .bench import BenchConfig, RowReport, generate_problem, run_rows
from .derivatives import (
    HessianResult,
    ThirdOrderResult,
    hessian_seeded,
    third_order_nested,
)
from .errors import DepthError, DomainError, NonFiniteDerivativeError
from .nll import (
    Intrinsics,
    NLLProblem,
    Observation,
    PriorSpec,
    below_seam_gradient,
    nll_grad,
    nll_value,
    pseudo_huber,
)
from .scalars import BACKEND, Dual6, NestedDual6, seed_identity
from .se3 import (
    Pose3,
    adjoint,
    compose,
    exp_se3,
    inverse,
    j_act,
    jr_inv_se3,
    jr_se3,
    log_se3,
    q_tilde_r,
)
from .so3 import exp_so3, hat, jr_inv_so3, jr_so3, log_so3

__version__ = "0.1.0"
