from .sign import (
    ETA,
    OddPolynomial,
    SignCertificate,
    certify_sign_polynomial,
    degree_bound,
    eval_poly,
    measured_eta,
    sign_poly,
)
from .svt import GAMMA, matrix_svt_exact, qsvt_block_encoding, qsvt_query_cost

__all__ = [
    "ETA",
    "GAMMA",
    "OddPolynomial",
    "SignCertificate",
    "certify_sign_polynomial",
    "degree_bound",
    "eval_poly",
    "matrix_svt_exact",
    "measured_eta",
    "qsvt_block_encoding",
    "qsvt_query_cost",
    "sign_poly",
]
