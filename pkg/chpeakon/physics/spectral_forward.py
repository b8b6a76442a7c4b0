"""
Forward spectral transform of −y'' + y/4 = z·ω·y (+ z²·υ·y for conservative
states): Jost solutions, Wronskian, eigenvalues, norming and coupling
constants, string coefficients and Weyl function evaluation.

Numerics shoot (y, y') across the atoms; polynomial coefficients are only
built when the Jost solutions or the Wronskian are asked for explicitly.
"""

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq
from scipy.special import expit

from chpeakon.models.peakon import ConservativeState, PeakonConfig, interface_atoms
from chpeakon.models.spectral import (
    JostDirection, JostSolution, SpectralData, WeylForm, WeylRepresentation,
)
from chpeakon.utils.arithmetic import ExtendedField
from chpeakon.utils.config import get_settings
from chpeakon.utils.exceptions import (
    InvalidInputError, NotAnEigenvalueError, NumericalError,
)
from chpeakon.utils.logger import get_logger

MODULE = "spectral-forward"

logger = get_logger(__name__)

SpectralSource = Union[PeakonConfig, ConservativeState]
Interface = Tuple[float, float, float]


# ---------------------------------------------------------------------------
# Jost solutions in polynomial form
# ---------------------------------------------------------------------------

def jost_solution(state: SpectralSource, direction: JostDirection) -> JostSolution:
    """구간별 다항식 계수로 표현한 Jost 해 φ±"""
    interfaces = interface_atoms(state)
    one, zero = Polynomial([1.0]), Polynomial([0.0])
    direction = JostDirection(direction)

    if direction is JostDirection.MINUS:
        a, b = one, zero
        coefficients = [(a, b)]
        for x, omega, upsilon in interfaces:
            w = Polynomial([0.0, omega, upsilon])
            # y(x) e^{∓x/2} 로 계수 점프를 표현
            a, b = a - w * (a + b * math.exp(-x)), b + w * (a * math.exp(x) + b)
            coefficients.append((a, b))
    else:
        a, b = zero, one
        coefficients = [(a, b)]
        for x, omega, upsilon in reversed(interfaces):
            w = Polynomial([0.0, omega, upsilon])
            a, b = a + w * (a + b * math.exp(-x)), b - w * (a * math.exp(x) + b)
            coefficients.append((a, b))
        coefficients.reverse()

    return JostSolution(
        direction=direction,
        breakpoints=tuple(x for x, _, _ in interfaces),
        coefficients=tuple(coefficients),
    )


def wronskian_polynomial(state: SpectralSource) -> Polynomial:
    """W(z) = φ₊φ₋' − φ₊'φ₋ = A-coefficient of φ₋ beyond the last atom"""
    a, _ = jost_solution(state, JostDirection.MINUS).coefficients[-1]
    return a.trim()


# ---------------------------------------------------------------------------
# Shooting
# ---------------------------------------------------------------------------

def _free(h, y, dy, ctx=math):
    c, s = ctx.cosh(0.5 * h), ctx.sinh(0.5 * h)
    return c * y + 2.0 * s * dy, 0.5 * s * y + c * dy


def _shoot_minus(interfaces: Sequence[Interface], z, ctx=math):
    """φ₋ 을 왼쪽→오른쪽으로: 계면별 (y, y'(x−), y'(x+)) 와 z-도함수

    ctx is the math module or an mpmath context; interfaces and z must be
    numbers of that context.
    """
    x0 = interfaces[0][0]
    y, dy = ctx.exp(0.5 * x0), 0.5 * ctx.exp(0.5 * x0)
    gy, gdy = 0.0 * y, 0.0 * y
    records = []
    prev = x0
    for x, omega, upsilon in interfaces:
        y, dy = _free(x - prev, y, dy, ctx)
        gy, gdy = _free(x - prev, gy, gdy, ctx)
        w, dw = z * omega + z * z * upsilon, omega + 2.0 * z * upsilon
        left = dy
        dy, gdy = dy - w * y, gdy - dw * y - w * gy
        records.append((y, left, dy))
        prev = x
    return records, (y, dy, gy, gdy)


def _shoot_plus(interfaces: Sequence[Interface], z, ctx=math):
    """φ₊ 를 오른쪽→왼쪽으로: 계면별 (y, y'(x+)) 와 첫 계면 왼쪽 값"""
    xn = interfaces[-1][0]
    y, dy = ctx.exp(-0.5 * xn), -0.5 * ctx.exp(-0.5 * xn)
    records = []
    prev = xn
    for x, omega, upsilon in reversed(interfaces):
        y, dy = _free(x - prev, y, dy, ctx)
        records.append((y, dy))
        dy = dy + (z * omega + z * z * upsilon) * y
        prev = x
    records.reverse()
    return records, (y, dy)


def _wronskian_value(interfaces: Sequence[Interface], z):
    _, (y, dy, gy, gdy) = _shoot_minus(interfaces, z)
    scale = 0.5 * math.exp(-0.5 * interfaces[-1][0])
    return scale * (y + 2.0 * dy), scale * (gy + 2.0 * gdy)


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------

def _newton(interfaces: Sequence[Interface], lam: float, iterations: int = 60) -> float:
    for _ in range(iterations):
        w, dw = _wronskian_value(interfaces, lam)
        if dw == 0.0 or not math.isfinite(w):
            break
        step = w / dw
        lam -= step
        if abs(step) <= 4.0 * np.finfo(float).eps * abs(lam):
            break
    return lam


def _accept(
    interfaces: Sequence[Interface], poly: Polynomial, roots: List[float], degree: int, tol: float
) -> bool:
    if len(roots) != degree or any(r == 0.0 or not math.isfinite(r) for r in roots):
        return False
    ordered = sorted(roots)
    if any(b - a <= 1e-10 * max(abs(a), abs(b)) for a, b in zip(ordered, ordered[1:])):
        return False
    coef = np.abs(poly.coef)
    for lam in ordered:
        residual = abs(_wronskian_value(interfaces, lam)[0])
        scale = float(np.sum(coef * np.abs(lam) ** np.arange(len(coef))))
        if residual > tol * scale:
            return False
    return True


def _bracketed_roots(interfaces: Sequence[Interface], poly: Polynomial) -> List[float]:
    """부호 변화 + brentq 대체 경로 (W 의 근은 실수이고 단순)"""
    c = poly.coef
    degree = len(c) - 1
    spread = math.sqrt(max(c[1] ** 2 - 2.0 * c[2], 0.0)) if degree >= 2 else abs(c[1])
    low = 1.0 / spread
    high = max(spread ** (degree - 1) / abs(c[-1]), low)
    grid = np.geomspace(0.5 * low, 2.0 * high, 4000)
    roots = []
    f = lambda z: _wronskian_value(interfaces, z)[0]
    for sign in (-1.0, 1.0):
        zs = sign * grid
        values = np.array([f(z) for z in zs])
        for k in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]:
            roots.append(brentq(f, zs[k], zs[k + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps))
    return sorted(roots)


def eigenvalues(state: SpectralSource) -> np.ndarray:
    """W 의 실수 단순근: companion 행렬 → Newton 보정 → (필요시) 구간 탐색"""
    interfaces = interface_atoms(state)
    poly = wronskian_polynomial(state) if interfaces else Polynomial([1.0])
    degree = len(poly.coef) - 1
    if degree < 1:
        raise InvalidInputError("eigenvalues need at least one atom", MODULE)
    tol = get_settings().root_tolerance

    estimates = poly.roots()
    roots = sorted(_newton(interfaces, float(np.real(r))) for r in estimates)
    if not _accept(interfaces, poly, roots, degree, tol):
        logger.info("companion estimates rejected; falling back to bracketing")
        roots = [_newton(interfaces, r) for r in _bracketed_roots(interfaces, poly)]
        if not _accept(interfaces, poly, roots, degree, tol):
            raise NumericalError(
                f"could not isolate {degree} real simple eigenvalues (got {len(roots)})", MODULE
            )
    field = _precise_field(interfaces)
    lifted = _lift(interfaces, field)
    return np.array(sorted(float(_refine(lifted, r, field, None)) for r in roots))


# ---------------------------------------------------------------------------
# Norming and coupling constants
# ---------------------------------------------------------------------------

def _precise_field(interfaces: Sequence[Interface]) -> ExtendedField:
    """φ₋ 의 성장 모드 e^{x/2} 상쇄를 견딜 자릿수의 필드"""
    span = interfaces[-1][0] - interfaces[0][0]
    return ExtendedField(get_settings().hankel_dps + int(math.ceil(span / math.log(10.0))))


def _lift(interfaces: Sequence[Interface], field: ExtendedField) -> List[tuple]:
    return [tuple(field.convert(v) for v in atom) for atom in interfaces]


def _refine(lifted: Sequence[tuple], lam, field: ExtendedField, tol: Optional[float]):
    """확장 정밀도 Newton; 첫 보정이 tol·|λ| 를 넘으면 고유값이 아님"""
    ctx = field.ctx
    z = ctx.mpf(lam)
    floor = ctx.mpf(10) ** (5 - ctx.dps)
    for iteration in range(60):
        _, (y, dy, gy, gdy) = _shoot_minus(lifted, z, ctx)
        slope = gy + 2 * gdy
        if slope == 0:
            raise NumericalError(f"flat Wronskian at λ={lam!r}", MODULE)
        step = (y + 2 * dy) / slope
        if iteration == 0 and tol is not None and abs(step) > tol * abs(z):
            raise NotAnEigenvalueError(
                f"{lam!r} is not an eigenvalue: nearest root is {float(z - step)!r}", MODULE
            )
        z -= step
        if abs(step) <= floor * abs(z):
            break
    return z


def _at_eigenvalues(state: SpectralSource, sigma: Sequence[float]):
    """고유값마다 (정밀 필드, λ, φ₋ 기록, β_end) 를 산출"""
    interfaces = interface_atoms(state)
    if not interfaces:
        raise InvalidInputError("constants need at least one atom", MODULE)
    field = _precise_field(interfaces)
    lifted = _lift(interfaces, field)
    tol = get_settings().eigen_residual_tolerance
    for lam in sigma:
        z = _refine(lifted, lam, field, tol)
        records, (y_end, dy_end, _, _) = _shoot_minus(lifted, z, field.ctx)
        yield field, lifted, z, records, 0.5 * (y_end - 2 * dy_end)


def norming_constants(state: SpectralSource, sigma: Sequence[float]) -> np.ndarray:
    """1/γ_λ = ∫|φ₋'|² + ¼∫|φ₋|² + ∫|λφ₋|² dυ, 구간별 닫힌 형식"""
    gammas = []
    for field, lifted, z, records, beta_end in _at_eigenvalues(state, sigma):
        ctx = field.ctx
        total = records[0][0] ** 2 / 2
        for k, (y, _, dy) in enumerate(records[:-1]):
            h = lifted[k + 1][0] - lifted[k][0]
            alpha, beta = (y + 2 * dy) / 2, (y - 2 * dy) / 2
            total += (alpha ** 2 * ctx.expm1(h) - beta ** 2 * ctx.expm1(-h)) / 2
        total += beta_end ** 2 / 2
        total += sum(z ** 2 * upsilon * rec[0] ** 2 for (_, _, upsilon), rec in zip(lifted, records))
        if not total > 0:
            raise NumericalError(f"nonpositive norming integral at λ={float(z)!r}", MODULE)
        gammas.append(float(1 / total))
    return np.array(gammas)


def coupling_constants(state: SpectralSource, sigma: Sequence[float]) -> np.ndarray:
    """c_λ = φ₊/φ₋, 모든 계면에서 x-독립성 검증"""
    tolerance = get_settings().coupling_tolerance
    couplings = []
    for field, lifted, z, minus, beta_end in _at_eigenvalues(state, sigma):
        ctx = field.ctx
        c = ctx.exp(-lifted[-1][0] / 2) / beta_end
        plus, _ = _shoot_plus(lifted, z, ctx)
        magnitude = max(abs(y) + abs(d) for y, d in plus)
        mismatch = max(
            abs(yp - c * ym) + abs(dp - c * dm)
            for (yp, dp), (ym, _, dm) in zip(plus, minus)
        )
        if mismatch > tolerance * magnitude:
            raise NotAnEigenvalueError(
                f"φ₊/φ₋ varies across intervals at λ={float(z)!r} "
                f"(mismatch {float(mismatch / magnitude):.3e})",
                MODULE,
            )
        couplings.append(float(c))
    return np.array(couplings)


def spectral_data(state: SpectralSource) -> SpectralData:
    sigma = eigenvalues(state)
    return SpectralData(
        eigenvalues=tuple(float(s) for s in sigma),
        gammas=tuple(float(g) for g in norming_constants(state, sigma)),
        couplings=tuple(float(c) for c in coupling_constants(state, sigma)),
    )


# ---------------------------------------------------------------------------
# String coefficients and the Weyl function
# ---------------------------------------------------------------------------

def _string_lengths(xs: np.ndarray) -> np.ndarray:
    if len(xs) == 0:
        return np.array([1.0])
    a, b = xs[:-1], xs[1:]
    # ½(tanh(b/2) − tanh(a/2)) without cancellation
    middle = 0.5 * np.sinh(0.5 * (b - a)) / (np.cosh(0.5 * a) * np.cosh(0.5 * b))
    return np.concatenate([[expit(xs[0])], middle, [expit(-xs[-1])]])


def string_coefficients(state: SpectralSource) -> Tuple[np.ndarray, np.ndarray]:
    """mₙ = 4ωₙcosh²(xₙ/2) (= 8pₙcosh²(qₙ/2)), lₙ = ½(tanh(xₙ₊₁/2) − tanh(xₙ/2))"""
    interfaces = interface_atoms(state)
    xs = np.array([x for x, _, _ in interfaces], dtype=float)
    omega = np.array([o for _, o, _ in interfaces], dtype=float)
    return 4.0 * omega * np.cosh(0.5 * xs) ** 2, _string_lengths(xs)


def dipole_weights(state: SpectralSource) -> np.ndarray:
    """vₙ = 4υₙcosh²(xₙ/2)"""
    interfaces = interface_atoms(state)
    xs = np.array([x for x, _, _ in interfaces], dtype=float)
    upsilon = np.array([u for _, _, u in interfaces], dtype=float)
    return 4.0 * upsilon * np.cosh(0.5 * xs) ** 2


def partial_fraction_representation(data: SpectralData) -> WeylRepresentation:
    return WeylRepresentation.partial_fraction(data.eigenvalues, data.gammas)


def continued_fraction_representation(state: SpectralSource) -> WeylRepresentation:
    m, l = string_coefficients(state)
    v = dipole_weights(state)
    return WeylRepresentation.continued_fraction(
        [float(x) for x in m], [float(x) for x in l],
        [float(x) for x in v] if np.any(v) else (),
    )


def weyl_eval(rep: WeylRepresentation, z):
    """M(z): 부분분수 Σγ/(λ−z) 또는 유한 연분수"""
    if isinstance(z, np.generic):
        z = z.item()
    try:
        if rep.form is WeylForm.PARTIAL_FRACTION:
            return sum(r / (p - z) for p, r in zip(rep.poles, rep.residues))
        if z == 0:
            raise ZeroDivisionError("z = 0")
        levels = rep.v or (0,) * len(rep.m)
        t = -rep.l[-1]
        for n in range(len(rep.m), 0, -1):
            t = rep.m[n - 1] * z + levels[n - 1] * z * z + 1 / t
            t = -rep.l[n - 1] + 1 / t
        return (1 + 1 / t) / z
    except ZeroDivisionError as exc:
        raise InvalidInputError(f"M is singular at z={z!r}: {exc}", MODULE) from exc


def weyl_from_jost(state: SpectralSource, z: complex) -> complex:
    """극한 정의: 가장 왼쪽 구간에서 φ₊ = A₀e^{x/2} + W(z)e^{−x/2}, M = A₀/(zW)"""
    interfaces = interface_atoms(state)
    if not interfaces:
        return 0.0
    _, (y, dy) = _shoot_plus(interfaces, z)
    x1 = interfaces[0][0]
    a0 = 0.5 * math.exp(-0.5 * x1) * (y + 2.0 * dy)
    w = 0.5 * math.exp(0.5 * x1) * (y - 2.0 * dy)
    return a0 / (z * w)
