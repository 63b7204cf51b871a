"""解析常数：lambda(sigma)、vartheta(sigma)、A 的允许范围、预测常数与预测下界曲线。"""
"""EN: Analytic constants: lambda(sigma), vartheta(sigma), the admissible A range, predicted constants and predicted lower-bound curves."""


import logging
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Literal

from scipy.integrate import quad

from .config import (
    A_AUTO_FACTOR,
    EPSILON_DEFAULT,
    LAMBDA_QUAD_TOL,
    Y_LOG_NUMERATOR,
    PREDICTED_BOUND_MIN_Q,
    Y_CAP_DEFAULT,
)
from .errors import BoundInapplicableWarning, DomainError, InvalidArgumentError

logger = logging.getLogger(__name__)

ConstantVariant = Literal["theorem-cap", "achieved"]
AMode = Literal["auto", "fixed"]
YSource = Literal["asymptotic", "cap", "X"]

# cos(theta) 在此阈值内视为 0，使 theta = pi/2 得到精确的 0。
# EN: cos(theta) within this threshold counts as 0, so theta = pi/2 yields an exact zero.
_COS_SNAP = 1e-15


def theta_cos(theta: float) -> float:
    value = math.cos(float(theta))
    return 0.0 if abs(value) < _COS_SNAP else value


def _check_open_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not 0.5 < sigma < 1.0:
        raise InvalidArgumentError(f"sigma 须在 (1/2, 1) 内: sigma={sigma}")
    return sigma


def lambda_sigma(sigma: float) -> float:
    """lambda(sigma) = int_0^1 t^sigma / (2 - t^sigma) dt，自适应求积。"""
    """EN: lambda(sigma) = int_0^1 t^sigma / (2 - t^sigma) dt by adaptive quadrature."""
    sigma = float(sigma)
    if not sigma > 0:
        raise DomainError(f"lambda(sigma) 需要 sigma > 0: sigma={sigma}")
    value, _ = quad(
        lambda t: t**sigma / (2.0 - t**sigma),
        0.0,
        1.0,
        epsabs=LAMBDA_QUAD_TOL,
        epsrel=LAMBDA_QUAD_TOL,
        limit=200,
    )
    return float(value)


def vartheta(sigma: float) -> float:
    """零点密度指数 min(3(1-sigma)/(2-sigma), 2(1-sigma)/sigma)。"""
    """EN: Zero-density exponent min(3(1-sigma)/(2-sigma), 2(1-sigma)/sigma)."""
    sigma = float(sigma)
    if not 0.5 <= sigma <= 1.0:
        raise DomainError(f"vartheta 需要 sigma 在 [1/2, 1] 内: sigma={sigma}")
    gap = 1.0 - sigma
    return min(3.0 * gap / (2.0 - sigma), 2.0 * gap / sigma)


def default_epsilon(sigma: float) -> float:
    # 默认 0.01，但必须严格小于 sigma - 1/2。
    # EN: Default 0.01, kept strictly below sigma - 1/2.
    return min(EPSILON_DEFAULT, (float(sigma) - 0.5) / 2.0)


def _check_epsilon(sigma: float, epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 <= epsilon < sigma - 0.5:
        raise InvalidArgumentError(f"epsilon 须满足 0 <= epsilon < sigma - 1/2: epsilon={epsilon}, sigma={sigma}")
    return epsilon


def exceptional_exponent(sigma: float, epsilon: float, grh: bool = False) -> float:
    """例外特征个数的指数 vartheta(sigma - epsilon)；GRH 下为 0。"""
    """EN: Exponent of the exceptional-character count, vartheta(sigma - epsilon); zero under GRH."""
    if grh:
        return 0.0
    return vartheta(float(sigma) - _check_epsilon(float(sigma), epsilon))


def a_max(sigma: float, epsilon: float, grh: bool = False) -> float:
    """A 的上确界 (1 - vartheta(sigma - epsilon)) / (sigma (1 + lambda(sigma)))。"""
    """EN: Supremum of A, (1 - vartheta(sigma - epsilon)) / (sigma (1 + lambda(sigma)))."""
    sigma = float(sigma)
    if not 0.5 < sigma <= 1.0:
        raise InvalidArgumentError(f"sigma 须在 (1/2, 1] 内: sigma={sigma}")
    _check_epsilon(sigma, epsilon)
    theta_exp = exceptional_exponent(sigma, epsilon, grh)
    return (1.0 - theta_exp) / (sigma * (1.0 + lambda_sigma(sigma)))


def resolve_A(sigma: float, epsilon: float, grh: bool, A: float | str = "auto") -> tuple[float, AMode]:
    """"auto" 解析为 0.99 * a_max；数值 A 原样使用。"""
    """EN: "auto" resolves to 0.99 * a_max; a numeric A is used as given."""
    if isinstance(A, str):
        if A.strip().lower() != "auto":
            raise InvalidArgumentError(f"A 必须是正数或 auto: {A}")
        return A_AUTO_FACTOR * a_max(sigma, epsilon, grh), "auto"
    value = float(A)
    if not value > 0:
        raise InvalidArgumentError(f"A 必须为正: A={value}")
    limit = a_max(sigma, epsilon, grh)
    if value >= limit:
        logger.warning("A=%.6f 不小于 a_max=%.6f，矩估计的前提不再成立", value, limit)
    return value, "fixed"


def predicted_constant(
    sigma: float,
    theta: float,
    A: float,
    variant: ConstantVariant = "achieved",
    epsilon: float | None = None,
    grh: bool = False,
) -> float:
    """预测常数，o(1) 项略去。

    theorem-cap: cos(theta) (sigma/(1-sigma)) ((1 - vartheta(sigma-epsilon)) / (2 sigma))^{1-sigma}
    achieved:    cos(theta) (sigma/(1-sigma)) A^{1-sigma}
    """
    """EN: Predicted constant with the o(1) terms dropped; see the two variants above."""
    sigma = _check_open_sigma(sigma)
    c = theta_cos(theta)
    if c < 0:
        raise InvalidArgumentError(f"cos(theta) < 0 时下界不适用: theta={theta}")
    shape = c * sigma / (1.0 - sigma)
    if variant == "achieved":
        if not A > 0:
            raise InvalidArgumentError(f"A 必须为正: A={A}")
        return shape * float(A) ** (1.0 - sigma)
    if variant == "theorem-cap":
        eps = default_epsilon(sigma) if epsilon is None else epsilon
        theta_exp = exceptional_exponent(sigma, eps, grh)
        return shape * ((1.0 - theta_exp) / (2.0 * sigma)) ** (1.0 - sigma)
    raise InvalidArgumentError(f"未知的常数变体: {variant}")


@dataclass(frozen=True)
class PredictedBound:
    log_l: float
    log_deriv: float
    grh: bool = False


def predicted_bound(
    q: int, sigma: float, theta: float, A: float, grh: bool = False, epsilon: float | None = None
) -> PredictedBound:
    """log L 下界 C (log q)^{1-sigma} (log log q)^{-sigma} 与 L'/L 下界 C (log q)^{1-sigma} (log log q)^{1-sigma}。"""
    """EN: log L bound C (log q)^{1-sigma} (log log q)^{-sigma} and L'/L bound C (log q)^{1-sigma} (log log q)^{1-sigma}."""
    if int(q) < PREDICTED_BOUND_MIN_Q:
        raise InvalidArgumentError(f"预测下界要求 q >= {PREDICTED_BOUND_MIN_Q}: q={q}")
    sigma = _check_open_sigma(sigma)
    eps = default_epsilon(sigma) if epsilon is None else epsilon
    limit = a_max(sigma, eps, grh)
    if A >= limit:
        warnings.warn(
            f"A={A:.6f} 不小于 a_max={limit:.6f}（grh={grh}），预测下界不再有保证", BoundInapplicableWarning, stacklevel=2
        )
    constant = predicted_constant(sigma, theta, A, "achieved")
    log_q = math.log(int(q))
    log_log_q = math.log(log_q)
    base = constant * log_q ** (1.0 - sigma)
    return PredictedBound(
        log_l=base * log_log_q ** (-sigma), log_deriv=base * log_log_q ** (1.0 - sigma), grh=bool(grh)
    )


def default_x(q: int, A: float) -> float:
    """X = A log q log log q。"""
    """EN: X = A log q log log q."""
    log_q = math.log(int(q))
    return float(A) * log_q * math.log(log_q)


def asymptotic_y_log(q: int, sigma: float) -> float:
    # Y = (log q)^{100/(sigma-1/2)} 太大，只计算其对数。
    # EN: Y = (log q)^{100/(sigma-1/2)} is astronomical, so only its logarithm is computed.
    return Y_LOG_NUMERATOR / (float(sigma) - 0.5) * math.log(math.log(int(q)))


def resolve_y(q: int, sigma: float, X: float, cap: float = Y_CAP_DEFAULT) -> tuple[float, YSource]:
    """Y = max(X, min(渐近 Y, cap))，并返回取值来源。"""
    """EN: Y = max(X, min(asymptotic Y, cap)), together with where the value came from."""
    exponent = asymptotic_y_log(q, sigma)
    if exponent < math.log(cap):
        Y, source = math.exp(exponent), "asymptotic"
    else:
        Y, source = float(cap), "cap"
    if Y < X:
        return float(X), "X"
    return Y, source


def q1_growth_exponent(sigma: float, A: float) -> float:
    """Q1 的增长指数 1 + A sigma (1 - lambda(sigma))，即 Q1 << q^{该指数 + o(1)}。"""
    """EN: Growth exponent of Q1, 1 + A sigma (1 - lambda(sigma))."""
    return 1.0 + float(A) * float(sigma) * (1.0 - lambda_sigma(sigma))


def weight_growth_exponent(sigma: float, A: float) -> float:
    """|R(chi)|^2 << q^{2 sigma A}。"""
    """EN: |R(chi)|^2 << q^{2 sigma A}."""
    return 2.0 * float(sigma) * float(A)


def montgomery_constant(sigma: float) -> float:
    """zeta 情形的经典常数 (sigma - 1/2)^{1/2} / 20，只用于展示。"""
    """EN: The classical zeta-case constant (sigma - 1/2)^{1/2} / 20, display only."""
    return math.sqrt(float(sigma) - 0.5) / 20.0


HISTORICAL_SHAPES = {
    "zeta_log_lower": "(sigma-1/2)^(1/2)/20 * (log T)^(1-sigma) / (log log T)^sigma",
    "log_abs_l_lower": "C(sigma) * (log q)^(1-sigma) / (log log q)^sigma",
    "neg_re_logderiv_lower": "c(sigma) * (log q)^(1-sigma) * (log log q)^(1-sigma), c(sigma) not computed",
}


@dataclass(frozen=True)
class ConstantBundle:
    sigma: float
    epsilon: float
    theta: float
    grh: bool
    lambda_value: float
    vartheta: float
    a_max_uncond: float
    a_max_grh: float
    A: float
    c_theorem_cap: float
    c_achieved: float
    q1_growth_exponent: float
    weight_growth_exponent: float
    exceptional_exponent: float
    montgomery_constant: float
    display: dict[str, str] = field(default_factory=lambda: dict(HISTORICAL_SHAPES))
    asymptotic_terms_dropped: bool = True

    def to_dict(self) -> dict:
        payload = asdict(self)
        payload["lambda"] = payload.pop("lambda_value")
        return payload

    def format_text(self) -> str:
        """按键对齐的文本输出。"""
        """EN: Aligned key/value text."""
        payload = self.to_dict()
        display = payload.pop("display")
        width = max(len(key) for key in list(payload) + list(display))
        lines = []
        for key, value in payload.items():
            shown = f"{value:.12g}" if isinstance(value, float) else str(value)
            lines.append(f"{key.ljust(width)} : {shown}")
        for key, value in display.items():
            lines.append(f"{key.ljust(width)} : {value}")
        return "\n".join(lines)


def constant_bundle(sigma: float, theta: float, epsilon: float | None = None, grh: bool = False) -> ConstantBundle:
    """汇总给定 (sigma, theta, epsilon, grh) 下的全部常数。A 取当前模式下的 0.99 * a_max。"""
    """EN: Collect every constant for (sigma, theta, epsilon, grh); A is 0.99 * a_max for the selected mode."""
    sigma = _check_open_sigma(sigma)
    epsilon = default_epsilon(sigma) if epsilon is None else _check_epsilon(sigma, epsilon)
    uncond = a_max(sigma, epsilon, grh=False)
    with_grh = a_max(sigma, epsilon, grh=True)
    A = A_AUTO_FACTOR * (with_grh if grh else uncond)
    return ConstantBundle(
        sigma=sigma,
        epsilon=epsilon,
        theta=float(theta),
        grh=bool(grh),
        lambda_value=lambda_sigma(sigma),
        vartheta=vartheta(sigma - epsilon),
        a_max_uncond=uncond,
        a_max_grh=with_grh,
        A=A,
        c_theorem_cap=predicted_constant(sigma, theta, A, "theorem-cap", epsilon=epsilon, grh=grh),
        c_achieved=predicted_constant(sigma, theta, A, "achieved"),
        q1_growth_exponent=q1_growth_exponent(sigma, A),
        weight_growth_exponent=weight_growth_exponent(sigma, A),
        exceptional_exponent=exceptional_exponent(sigma, epsilon, grh),
        montgomery_constant=montgomery_constant(sigma),
    )
