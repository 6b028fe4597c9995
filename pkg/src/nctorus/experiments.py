"""Reproducible experiment runners behind the command-line interface.

Four runners exercise the library end to end: a property suite executing
every module's invariants on seeded random data, a Schatten-norm scan of
random smooth kernels across box sizes, a potential-decay fit for the
diagonal Bessel spectra, a factorization and adjoint identity check, and
the Schwartz coefficient-bound sweep.  All runners are deterministic
given (config, seed); grid points run on a bounded thread pool (capped
by the NCTORUS_THREADS environment variable) and records are sorted
before emission so scheduling never leaks into the output.
"""

from __future__ import annotations

import io
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import (
    embedded,
    inner_product,
    involution,
    l2_norm,
    laplacian,
    monomial,
    mult_matrix,
    partial_derivative,
    random_element,
    restricted,
    trace,
    twisted_convolve,
    unit,
)
from .cocycle import (
    ReducedTheta,
    ThetaMatrix,
    phase_pairs,
    reduce_theta,
    theta_from_json,
)
from .kernels import (
    apply_kernel,
    bessel_kernel,
    flip_adjoint,
    kernel_matrix,
    mixed_sobolev_norm,
    op_multiply,
    random_kernel,
    schwartz_coefficients,
    sobolev_lift,
)
from .lattice import LatticeBox
from .multipliers import apply_multiplier, bessel_symbol, multiplier_matrix, riesz_symbol
from .operators import OperatorMatrix
from .reference import apply_kernel_definitional, convolve_coefficients
from .schatten import (
    SingularSpectrum,
    critical_exponent,
    decay_exponent,
    default_decay_window,
    schatten_norm,
    singular_values,
    weak_norm,
)

__all__ = [
    "ExperimentConfig",
    "ScanRecord",
    "DecayRecord",
    "FactorizationRecord",
    "CheckResult",
    "SuiteReport",
    "default_theta",
    "run_property_suite",
    "run_theorem_scan",
    "run_potential_decay",
    "run_factorization_check",
    "run_schwartz_bound",
    "scan_to_csv",
    "decay_to_csv",
    "factor_to_csv",
    "thread_cap",
    "MEMORY_GUARD_CARDINALITY",
]

# Largest box cardinality (2N+1)^d the dense-matrix runners will accept;
# beyond this a single kernel matrix tops 0.4 GB and the SVD minutes.
MEMORY_GUARD_CARDINALITY = 5000

_IRRATIONAL = 0.7071067811865476  # double closest to 1/sqrt(2)


def default_theta(d: int = 2) -> ThetaMatrix:
    """Skew matrix with an irrational twist in the leading 2x2 block."""
    entries = np.zeros((d, d))
    entries[1, 0] = _IRRATIONAL
    entries[0, 1] = -_IRRATIONAL
    return ThetaMatrix(entries)


def thread_cap(n_tasks: int) -> int:
    """Worker count: min(tasks, cpu count, NCTORUS_THREADS if set)."""
    cap = os.cpu_count() or 1
    env = os.environ.get("NCTORUS_THREADS")
    if env is not None:
        try:
            cap = min(cap, max(1, int(env)))
        except ValueError:
            raise ValueError(f"NCTORUS_THREADS={env!r} is not an integer") from None
    return max(1, min(n_tasks, cap))


def _guard_box(d: int, radius: int) -> None:
    card = (2 * radius + 1) ** d
    if card > MEMORY_GUARD_CARDINALITY:
        raise ValueError(
            f"box cardinality (2N+1)^d = {card} exceeds the dense-matrix guard "
            f"of {MEMORY_GUARD_CARDINALITY}; reduce N or d"
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """Inputs for the grid runners; validated on construction."""

    d: int = 2
    theta: ThetaMatrix | None = None
    N_grid: tuple = (4, 6, 8, 10)
    alpha1: float = 1.0
    alpha2: float = 1.0
    r_grid: tuple | None = None
    s_margin: float = 0.5
    seed: int = 42
    s0: float | None = None
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"dimension must be at least 2, got {self.d}")
        if self.theta is not None and self.theta.d != self.d:
            raise ValueError(
                f"theta has dimension {self.theta.d}, config says d={self.d}"
            )
        grid = tuple(int(n) for n in self.N_grid)
        if not grid or any(n < 0 for n in grid):
            raise ValueError(f"N grid must be nonempty and nonnegative, got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"N grid must be strictly increasing, got {grid}")
        object.__setattr__(self, "N_grid", grid)
        if self.alpha1 < 0 or self.alpha2 < 0:
            raise ValueError(
                f"smoothness orders must be nonnegative, got ({self.alpha1}, {self.alpha2})"
            )
        if self.r_grid is not None:
            rg = tuple(float(r) for r in self.r_grid)
            if any(r <= 0 for r in rg):
                raise ValueError(f"all Schatten exponents must be positive, got {rg}")
            object.__setattr__(self, "r_grid", rg)
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be 'csv' or 'json', got {self.fmt!r}")

    @property
    def resolved_theta(self) -> ThetaMatrix:
        return self.theta if self.theta is not None else default_theta(self.d)

    @property
    def reduced(self) -> ReducedTheta:
        return reduce_theta(self.resolved_theta)

    @property
    def r_star(self) -> float:
        return critical_exponent(self.d, self.alpha1, self.alpha2)

    @property
    def resolved_r_grid(self) -> tuple:
        if self.r_grid is not None:
            return self.r_grid
        return (self.r_star * 1.1, 1.0, 2.0)

    @property
    def resolved_s0(self) -> float:
        return self.s0 if self.s0 is not None else float(self.d + 1)

    def envelope_exponents(self) -> tuple:
        """Random-kernel envelope giving membership in H^{alpha1, alpha2}."""
        half_d = self.d / 2.0
        return (
            self.alpha1 + half_d + self.s_margin,
            self.alpha2 + half_d + self.s_margin,
        )

    @staticmethod
    def from_json(doc: dict) -> "ExperimentConfig":
        known = {
            "d",
            "theta",
            "N_grid",
            "alpha1",
            "alpha2",
            "r_grid",
            "s_margin",
            "seed",
            "s0",
            "out",
            "format",
        }
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"config has unknown keys: {sorted(unknown)}")
        kwargs: dict = {}
        if "d" in doc:
            kwargs["d"] = int(doc["d"])
        if "theta" in doc:
            d = kwargs.get("d", len(doc["theta"]))
            kwargs["theta"] = theta_from_json({"d": d, "theta": doc["theta"]})
            kwargs.setdefault("d", d)
        for key in ("alpha1", "alpha2", "s_margin", "s0"):
            if key in doc:
                kwargs[key] = float(doc[key])
        if "N_grid" in doc:
            kwargs["N_grid"] = tuple(doc["N_grid"])
        if "r_grid" in doc:
            kwargs["r_grid"] = tuple(doc["r_grid"])
        if "seed" in doc:
            kwargs["seed"] = int(doc["seed"])
        if "out" in doc:
            kwargs["out"] = doc["out"]
        if "format" in doc:
            kwargs["fmt"] = doc["format"]
        return ExperimentConfig(**kwargs)


# ---------------------------------------------------------------------------
# property suite


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance

    def line(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        return f"{mark}  {self.name}: max error {self.max_error:.3e} (tol {self.tolerance:.1e})"


@dataclass(frozen=True)
class SuiteReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple:
        return tuple(c.name for c in self.checks if not c.passed)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "max_error": c.max_error,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }


def _coeff_gap(x, y) -> float:
    """Max coefficient difference after aligning supports."""
    r = max(x.box.radius, y.box.radius)
    box = LatticeBox(x.box.d, r)
    return float(np.max(np.abs(embedded(x, box).coeffs - embedded(y, box).coeffs)))


def _rel_frobenius(a: np.ndarray, b: np.ndarray) -> float:
    denom = np.linalg.norm(a)
    if denom == 0.0:
        return float(np.linalg.norm(a - b))
    return float(np.linalg.norm(a - b) / denom)


def run_property_suite(
    seed: int = 42,
    theta: ThetaMatrix | None = None,
    phase_fn=None,
) -> SuiteReport:
    """Execute every module invariant on seeded random data.

    phase_fn is a test-only hook replacing the cocycle phase evaluation
    inside the cocycle-identity checks; passing a corrupted version must
    make those checks fail (negative control).
    """
    full = theta if theta is not None else default_theta(2)
    d = full.d
    red = reduce_theta(full)
    rng = np.random.Generator(np.random.Philox(key=seed))
    phases = phase_fn if phase_fn is not None else phase_pairs
    checks = []

    def draw_points(n: int) -> np.ndarray:
        return rng.integers(-5, 6, size=(n, d))

    def record(name: str, err: float, tol: float) -> None:
        checks.append(CheckResult(name, float(err), tol))

    # cocycle: additivity in each slot, then the 2-cocycle identity
    m, n, p = draw_points(20), draw_points(20), draw_points(20)
    err = max(
        float(np.max(np.abs(phases(red.entries, m + n, p) - phases(red.entries, m, p) * phases(red.entries, n, p)))),
        float(np.max(np.abs(phases(red.entries, m, n + p) - phases(red.entries, m, n) * phases(red.entries, m, p)))),
    )
    record("cocycle-bicharacter", err, 1e-12)
    lhs = phases(red.entries, m, n) * phases(red.entries, m + n, p)
    rhs = phases(red.entries, n, p) * phases(red.entries, m, n + p)
    record("cocycle-identity", float(np.max(np.abs(lhs - rhs))), 1e-12)

    # commutation relation on basis monomials, via the full skew matrix
    box1 = LatticeBox(d, 1)
    err = 0.0
    for _ in range(10):
        a, b = rng.integers(-1, 2, size=(2, d))
        ua, ub = monomial(red, a, box1), monomial(red, b, box1)
        lhs_el = twisted_convolve(ua, ub)
        phase = np.exp(2j * np.pi * float(a @ full.entries @ b))
        rhs_el = phase * twisted_convolve(ub, ua)
        err = max(err, _coeff_gap(lhs_el, rhs_el))
    record("commutation-relation", err, 1e-10)

    # algebra axioms on random elements
    box = LatticeBox(d, 2)
    err_assoc = err_unit = err_trace = err_star = err_invol = 0.0
    err_plancherel = err_leibniz = 0.0
    for _ in range(8):
        f = random_element(red, box, rng)
        g = random_element(red, box, rng)
        h = random_element(red, box, rng)
        err_assoc = max(
            err_assoc,
            _coeff_gap(
                twisted_convolve(twisted_convolve(f, g), h),
                twisted_convolve(f, twisted_convolve(g, h)),
            ),
        )
        one = unit(red, LatticeBox(d, 0))
        err_unit = max(
            err_unit,
            _coeff_gap(twisted_convolve(f, one), f),
            _coeff_gap(twisted_convolve(one, f), f),
        )
        fg, gf = twisted_convolve(f, g), twisted_convolve(g, f)
        err_trace = max(err_trace, abs(trace(fg) - trace(gf)))
        err_star = max(
            err_star,
            _coeff_gap(involution(fg), twisted_convolve(involution(g), involution(f))),
        )
        err_invol = max(err_invol, _coeff_gap(involution(involution(f)), f))
        pairing = trace(twisted_convolve(involution(g), f))
        err_plancherel = max(
            err_plancherel,
            abs(inner_product(f, g) - pairing),
            abs(inner_product(f, f) - l2_norm(f) ** 2),
        )
        j = int(rng.integers(1, d + 1))
        err_leibniz = max(
            err_leibniz,
            _coeff_gap(
                partial_derivative(fg, j),
                twisted_convolve(partial_derivative(f, j), g)
                + twisted_convolve(f, partial_derivative(g, j)),
            ),
        )
    record("algebra-associativity", err_assoc, 1e-10)
    record("algebra-unit", err_unit, 1e-13)
    record("trace-property", err_trace, 1e-10)
    record("involution-antihomomorphism", err_star, 1e-10)
    record("involution-involutive", err_invol, 1e-13)
    record("plancherel-pairing", err_plancherel, 1e-10)
    record("derivation-leibniz", err_leibniz, 1e-10)

    # multiplier algebra: inverse pair and the Laplacian symbol
    x = random_element(red, box, rng)
    roundtrip = apply_multiplier(bessel_symbol(-1.3), apply_multiplier(bessel_symbol(1.3), x))
    err = _coeff_gap(roundtrip, x)
    lap = laplacian(x)
    via_riesz = (-4.0 * math.pi**2) * apply_multiplier(riesz_symbol(2.0), x)
    err = max(err, _coeff_gap(lap, via_riesz))
    record("multiplier-algebra", err, 1e-10)

    # left-multiplication matrix agrees with the convolution, truncated
    y = random_element(red, box, rng)
    mat = mult_matrix(x, box)
    err = float(
        np.max(np.abs(mat.apply(y.coeffs) - restricted(twisted_convolve(x, y), box).coeffs))
    )
    record("mult-matrix-consistency", err, 1e-10)

    # reversed product: compare against convolution with the transposed
    # reduction (a presentation of the negated twist), entry by entry
    small = LatticeBox(d, 1)
    err = 0.0
    for _ in range(4):
        a = random_element(red, small, rng)
        b = random_element(red, small, rng)
        prod = op_multiply(a, b)
        _, ref = convolve_coefficients(
            red.entries.T, small, a.coeffs, small, b.coeffs
        )
        err = max(err, float(np.max(np.abs(prod.coeffs - ref))))
    record("op-multiply-reversal", err, 1e-12)

    # kernel action: closed form vs the definitional partial trace
    kbox = LatticeBox(d, 1)
    err = 0.0
    for _ in range(4):
        k = random_kernel(red, 1, 0.5, 0.5, int(rng.integers(0, 2**31)))
        xk = random_element(red, kbox, rng)
        err = max(err, _coeff_gap(apply_kernel(k, xk), apply_kernel_definitional(k, xk)))
    record("kernel-oracle", err, 1e-11)

    # kernel matrix identities
    mbox = LatticeBox(d, 2)
    k = random_kernel(red, 2, 1.0, 1.0, seed + 1)
    mat = kernel_matrix(k, mbox)
    err = abs(mat.frobenius_norm() - k.l2_norm()) / max(k.l2_norm(), 1e-300)
    record("kernel-hs-identity", err, 1e-12)

    err = 0.0
    for p_idx in (0, mbox.cardinality // 3, mbox.cardinality - 1):
        mono = monomial(red, mbox.enumerate()[p_idx], mbox)
        col = apply_kernel(k, mono).coeffs
        err = max(err, float(np.max(np.abs(mat.entries[:, p_idx] - col))))
    record("kernel-column-consistency", err, 1e-12)

    err = 0.0
    for alpha in (0.0, 0.5, 1.7):
        bk = bessel_kernel(alpha, mbox, red)
        gap = kernel_matrix(bk, mbox) - multiplier_matrix(bessel_symbol(-alpha), mbox)
        err = max(err, float(np.max(np.abs(gap.entries))))
    record("bessel-kernel-diagonal", err, 1e-13)

    err = 0.0
    for a1, a2 in ((0.0, 0.0), (1.0, 1.0), (1.5, 0.7), (float(rng.uniform(0, 3)), float(rng.uniform(0, 3)))):
        lhs_m = multiplier_matrix(bessel_symbol(a1), mbox) @ kernel_matrix(k, mbox)
        rhs_m = kernel_matrix(sobolev_lift(k, a1, a2), mbox) @ multiplier_matrix(
            bessel_symbol(-a2), mbox
        )
        err = max(err, _rel_frobenius(lhs_m.entries, rhs_m.entries))
    record("factorization", err, 1e-12)

    err = _rel_frobenius(
        kernel_matrix(flip_adjoint(k), mbox).entries, np.conj(mat.entries.T)
    )
    record("adjoint-identity", err, 1e-12)

    # linearity of the kernel action in both arguments
    k2 = random_kernel(red, 2, 1.0, 1.0, seed + 2)
    xa = random_element(red, mbox, rng)
    xb = random_element(red, mbox, rng)
    c1, c2 = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
    err = _coeff_gap(
        apply_kernel(k + c1 * k2, xa),
        apply_kernel(k, xa) + c1 * apply_kernel(k2, xa),
    )
    err = max(
        err,
        _coeff_gap(
            apply_kernel(k, c2 * xa + xb),
            c2 * apply_kernel(k, xa) + apply_kernel(k, xb),
        ),
    )
    record("kernel-linearity", err, 1e-11)

    # Schatten block: unitary invariance under the cocycle diagonal,
    # adjoint norm equality, Hoelder composition, ideal inequality
    pts = mbox.enumerate()
    diag = np.diag(phase_pairs(red.entries, pts, -pts))
    spec_a = singular_values(mat)
    spec_b = singular_values(OperatorMatrix(mbox, diag @ mat.entries))
    denom = max(float(spec_a.values[0]), 1e-300)
    record(
        "schatten-unitary-invariance",
        float(np.max(np.abs(spec_a.values - spec_b.values))) / denom,
        1e-11,
    )
    err = 0.0
    for t in (0.7, 1.0, 2.0):
        err = max(
            err,
            abs(
                schatten_norm(singular_values(mat.adjoint()), t)
                - schatten_norm(spec_a, t)
            )
            / max(schatten_norm(spec_a, t), 1e-300),
        )
    record("schatten-adjoint-norm", err, 1e-11)

    viol = 0.0
    side = 24
    for p2 in (1.0, 2.0, 4.0):
        t = 1.0 / (0.5 + 1.0 / p2)
        for _ in range(6):
            a_m = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
            b_m = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
            lhs_n = schatten_norm(singular_values(a_m @ b_m), t)
            rhs_n = schatten_norm(singular_values(a_m), 2.0) * schatten_norm(
                singular_values(b_m), p2
            )
            viol = max(viol, lhs_n - rhs_n)
    record("holder-composition", max(viol, 0.0), 1e-10)

    a_m = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    b_m = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    mu_ab = singular_values(a_m @ b_m).values
    mu_b = singular_values(b_m).values
    a_top = singular_values(a_m).values[0]
    record("schatten-ideal", max(float(np.max(mu_ab - a_top * mu_b)), 0.0), 1e-10)

    # Schwartz coefficient bound with the default margin
    rep = schwartz_coefficients(k, 1.0, 1.0, float(d + 1))
    record("schwartz-bound", max(rep.worst_ratio - 1.0, 0.0), 1e-10)

    return SuiteReport(tuple(checks))


# ---------------------------------------------------------------------------
# theorem scan


@dataclass(frozen=True)
class ScanRecord:
    N: int
    r: float
    r_star: float
    s_r_norm: float
    weak_r_norm: float
    sobolev_norm: float
    wall_ms: float
    at_threshold: bool = False


def _scan_one(config: ExperimentConfig, radius: int) -> list:
    t0 = time.perf_counter()
    s1, s2 = config.envelope_exponents()
    red = config.reduced
    k = random_kernel(red, radius, s1, s2, config.seed)
    box = LatticeBox(config.d, radius)
    spectrum = singular_values(kernel_matrix(k, box))
    sob = mixed_sobolev_norm(k, config.alpha1, config.alpha2)
    r_star = config.r_star
    records = []
    for r in config.resolved_r_grid:
        records.append(
            ScanRecord(
                N=radius,
                r=float(r),
                r_star=r_star,
                s_r_norm=schatten_norm(spectrum, r),
                weak_r_norm=weak_norm(spectrum, r),
                sobolev_norm=sob,
                wall_ms=(time.perf_counter() - t0) * 1e3,
                at_threshold=(r == r_star),
            )
        )
    return records


def run_theorem_scan(config: ExperimentConfig) -> list:
    """One record per (N, r): Schatten and weak norms of a random smooth kernel.

    The kernel envelope puts it in the mixed Sobolev space of orders
    (alpha1, alpha2) by construction, so the scan watches the truncated
    S_r norms stabilize as the box grows.
    """
    for radius in config.N_grid:
        _guard_box(config.d, radius)
    records: list = []
    with ThreadPoolExecutor(max_workers=thread_cap(len(config.N_grid))) as pool:
        for batch in pool.map(lambda n: _scan_one(config, n), config.N_grid):
            records.extend(batch)
    records.sort(key=lambda rec: (rec.N, rec.r))
    return records


SCAN_FIELDS = ("N", "r", "r_star", "s_r_norm", "weak_r_norm", "sobolev_norm", "wall_ms")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _records_to_csv(records, fields) -> str:
    buf = io.StringIO()
    buf.write(",".join(fields) + "\n")
    for rec in records:
        buf.write(",".join(_fmt(getattr(rec, f)) for f in fields) + "\n")
    return buf.getvalue()


def scan_to_csv(records) -> str:
    return _records_to_csv(records, SCAN_FIELDS)


def scan_to_json(records, config: ExperimentConfig) -> dict:
    return {
        "d": config.d,
        "alpha1": config.alpha1,
        "alpha2": config.alpha2,
        "s_margin": config.s_margin,
        "seed": config.seed,
        "records": [
            {
                "N": rec.N,
                "r": rec.r,
                "r_star": rec.r_star,
                "s_r_norm": rec.s_r_norm,
                "weak_r_norm": rec.weak_r_norm,
                "sobolev_norm": rec.sobolev_norm,
                "wall_ms": rec.wall_ms,
                "at_threshold": rec.at_threshold,
            }
            for rec in records
        ],
    }


# ---------------------------------------------------------------------------
# potential decay


@dataclass(frozen=True)
class DecayRecord:
    N: int
    p: float
    weak_norm: float
    slope: float
    residual: float
    s_p_norm: float


DECAY_FIELDS = ("N", "p", "weak_norm", "slope", "residual", "s_p_norm")


def _decay_one(d: int, alpha: float, radius: int) -> DecayRecord:
    box = LatticeBox(d, radius)
    vals = np.sort(np.real(bessel_symbol(-alpha).values_on(box)))[::-1]
    spectrum = SingularSpectrum(vals, box.cardinality)
    p = d / alpha
    k_min, k_max = default_decay_window(box.cardinality)
    fit = decay_exponent(spectrum, k_min, k_max)
    return DecayRecord(
        N=radius,
        p=p,
        weak_norm=weak_norm(spectrum, p),
        slope=fit.slope,
        residual=fit.residual,
        s_p_norm=schatten_norm(spectrum, p),
    )


def run_potential_decay(d: int, alpha: float, N_grid) -> list:
    """Weak norm and fitted decay slope of the order -alpha Bessel spectra.

    Diagonal spectra need no SVD, so large boxes are cheap and no memory
    guard applies.  The p-th power sum is emitted alongside as data (it
    diverges logarithmically at the weak endpoint); only the weak norm
    and the slope carry assertions downstream.
    """
    if alpha <= 0:
        raise ValueError(f"potential order must be positive, got {alpha}")
    grid = tuple(int(n) for n in N_grid)
    records = []
    with ThreadPoolExecutor(max_workers=thread_cap(len(grid))) as pool:
        records = list(pool.map(lambda n: _decay_one(d, alpha, n), grid))
    records.sort(key=lambda rec: rec.N)
    return records


def decay_to_csv(records) -> str:
    return _records_to_csv(records, DECAY_FIELDS)


# ---------------------------------------------------------------------------
# factorization check


@dataclass(frozen=True)
class FactorizationRecord:
    N: int
    alpha1: float
    alpha2: float
    factor_error: float
    adjoint_error: float


FACTOR_FIELDS = ("N", "alpha1", "alpha2", "factor_error", "adjoint_error")

FACTOR_TOLERANCE = 1e-12


def _factor_one(config: ExperimentConfig, radius: int) -> list:
    red = config.reduced
    s1, s2 = config.envelope_exponents()
    k = random_kernel(red, radius, s1, s2, config.seed)
    box = LatticeBox(config.d, radius)
    k_mat = kernel_matrix(k, box)
    adj_err = _rel_frobenius(
        kernel_matrix(flip_adjoint(k), box).entries, np.conj(k_mat.entries.T)
    )
    rng = np.random.Generator(np.random.Philox(key=config.seed + radius))
    pairs = [(config.alpha1, config.alpha2), (0.0, 0.0)]
    pairs += [(float(rng.uniform(0, 3)), float(rng.uniform(0, 3))) for _ in range(3)]
    records = []
    for a1, a2 in pairs:
        lhs = multiplier_matrix(bessel_symbol(a1), box) @ k_mat
        rhs = kernel_matrix(sobolev_lift(k, a1, a2), box) @ multiplier_matrix(
            bessel_symbol(-a2), box
        )
        records.append(
            FactorizationRecord(
                N=radius,
                alpha1=a1,
                alpha2=a2,
                factor_error=_rel_frobenius(lhs.entries, rhs.entries),
                adjoint_error=adj_err,
            )
        )
    return records


def run_factorization_check(config: ExperimentConfig) -> list:
    """Relative Frobenius gap of the multiplier/kernel factorization.

    For each N the identity (Bessel multiplier) . (kernel operator) =
    (lifted-kernel operator) . (inverse Bessel multiplier) is assembled
    both ways, together with the adjoint-kernel/conjugate-transpose gap.
    """
    for radius in config.N_grid:
        _guard_box(config.d, radius)
    records: list = []
    with ThreadPoolExecutor(max_workers=thread_cap(len(config.N_grid))) as pool:
        for batch in pool.map(lambda n: _factor_one(config, n), config.N_grid):
            records.extend(batch)
    records.sort(key=lambda rec: (rec.N, rec.alpha1, rec.alpha2))
    return records


def factor_to_csv(records) -> str:
    return _records_to_csv(records, FACTOR_FIELDS)


def max_factor_error(records) -> float:
    return max(
        max(rec.factor_error for rec in records),
        max(rec.adjoint_error for rec in records),
    )


# ---------------------------------------------------------------------------
# Schwartz bound run


@dataclass(frozen=True)
class SchwartzRunResult:
    radius: int
    s0: float
    alpha1: float
    alpha2: float
    worst_ratio: float
    worst_index: tuple
    lifted_norm: float
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= 1.0 + self.tolerance

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "s0": self.s0,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "worst_ratio": self.worst_ratio,
            "worst_index": [list(ix) for ix in self.worst_index],
            "lifted_norm": self.lifted_norm,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }

    def to_csv(self) -> str:
        header = "radius,s0,alpha1,alpha2,worst_ratio,lifted_norm,passed\n"
        row = ",".join(
            [
                _fmt(self.radius),
                _fmt(self.s0),
                _fmt(self.alpha1),
                _fmt(self.alpha2),
                _fmt(self.worst_ratio),
                _fmt(self.lifted_norm),
                _fmt(self.passed),
            ]
        )
        return header + row + "\n"


def run_schwartz_bound(config: ExperimentConfig) -> SchwartzRunResult:
    """Worst coefficient-to-envelope ratio for a random kernel.

    The decay margin s0 must exceed the dimension; the value used is
    recorded in the result so output metadata pins the choice.
    """
    s0 = config.resolved_s0
    radius = max(config.N_grid)
    _guard_box(config.d, radius)
    red = config.reduced
    s1, s2 = config.envelope_exponents()
    k = random_kernel(red, radius, s1, s2, config.seed)
    report = schwartz_coefficients(k, config.alpha1, config.alpha2, s0)
    return SchwartzRunResult(
        radius=radius,
        s0=s0,
        alpha1=config.alpha1,
        alpha2=config.alpha2,
        worst_ratio=report.worst_ratio,
        worst_index=report.worst_index,
        lifted_norm=report.lifted_norm,
    )
