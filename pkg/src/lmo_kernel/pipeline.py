"""End-to-end assembly: the surgery invariant through two independent
routes on the diagram side, the perturbative invariant on the
Lie-theoretic side, and the order-by-order comparison

    graded weight of the surgery invariant
        = |H_1|^(number of positive roots) * perturbative invariant.

Certified order bookkeeping: an h-order N statement needs every diagram
with at most 2N internal vertices, so the series truncation is always
run at imax = 2N; wheel-like inputs (legs <= internal vertices in every
term) keep that certificate through the Gaussian integral.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from . import balg, liews, rootsys
from .diagrams import DiagramSeries, StructuralError, series_of
from .qseries import HSeries, modified_bernoulli, sinh_ratio

LIE_LABELS = ("A1", "A2", "A3")


@lru_cache(maxsize=None)
def lie_pair(label: str) -> tuple[rootsys.RootSystem, liews.LieAlgebraData]:
    """Matched root-system and Lie-algebra data for one CLI label."""
    if label not in LIE_LABELS:
        raise ValueError(f"unsupported Lie algebra label {label!r}")
    rs = rootsys.build_root_system(label)
    g = liews.build_sl(rs.rank + 1)
    return rs, g


@dataclass(frozen=True)
class SurgeryInput:
    """A framed knot: the builtin unknot or a diagram-series file with
    the zero-framed wheeled invariant of the knot."""

    knot: str                      # "unknot" or a file path
    framing: int
    declared_valid_degree: int | None = None

    def __post_init__(self):
        if self.framing == 0:
            raise ValueError("framing 0 does not give a rational homology "
                             "sphere")

    @property
    def is_builtin(self) -> bool:
        return self.knot == "unknot"

    @property
    def h1_order(self) -> int:
        return abs(self.framing)

    @property
    def sign(self) -> int:
        return 1 if self.framing > 0 else -1


def load_knot_series(path: str, imax: int) -> DiagramSeries:
    obj = json.loads(Path(path).read_text())
    s = DiagramSeries.from_json(obj, imax)
    balg._assert_strut_free(s, "knot input file")
    return s


def is_wheel_like(s: DiagramSeries) -> bool:
    return all(form.m <= form.t for form in s.terms if form.components)


@lru_cache(maxsize=None)
def _wheeled_omega(imax: int) -> DiagramSeries:
    return balg.wheeling_inverse(balg.omega(imax))


def _framing_series(f: Fraction, imax: int,
                    with_theta: bool) -> DiagramSeries:
    arg = DiagramSeries(imax)
    arg.add_diagram(balg.strut(), Fraction(f, 2))
    if with_theta:
        arg.add_diagram(balg.theta(), -Fraction(f, 48))
    return arg.exp_union()


def reduced_input(inp: SurgeryInput, imax: int) -> DiagramSeries:
    """Fully wheeled, framed series ready for the Gaussian integral:
    wheeled knot part, wheeled unknot correction, and the framing
    exponential exp((f/2)(strut - theta/24))."""
    if inp.is_builtin:
        base = _wheeled_omega(imax)
    else:
        base = balg.wheeling_inverse(load_knot_series(inp.knot, imax))
    out = base.union(_wheeled_omega(imax))
    return out.union(_framing_series(Fraction(inp.framing), imax,
                                     with_theta=True))


def hat_scalar(s: DiagramSeries, g: liews.LieAlgebraData,
               cap: int) -> HSeries:
    T = liews.hat_weight(s, g, cap)
    if not T.is_scalar():
        raise StructuralError("expected a closed (scalar) series")
    return T.scalar()


@lru_cache(maxsize=None)
def _omega_pair_scalar(label: str, order: int) -> HSeries:
    _, g = lie_pair(label)
    om = balg.omega(2 * order)
    return hat_scalar(balg.pair(om, om), g, order)


@lru_cache(maxsize=None)
def _theta_weight(label: str, order: int) -> HSeries:
    _, g = lie_pair(label)
    return hat_scalar(series_of(balg.theta(), 2 * order), g, order)


def lmo_via_definition(inp: SurgeryInput, label: str, order: int) -> HSeries:
    """Surgery invariant as the ratio of two Gaussian integrals, the
    denominator being the matching-sign unknot surgery."""
    imax = 2 * order
    _, g = lie_pair(label)
    num = hat_scalar(balg.fg_integral(reduced_input(inp, imax)), g, order)
    ref = SurgeryInput("unknot", inp.sign)
    den = hat_scalar(balg.fg_integral(reduced_input(ref, imax)), g, order)
    out = num * den.inverse()
    return out.truncate(min(order, out.cap))


def lmo_via_lemma(inp: SurgeryInput, label: str, order: int) -> HSeries:
    """Surgery invariant in closed form: the wheels pairing, a theta
    exponential with exponent (3 sign(f) - f)/48, and the Gaussian
    integral of the wheeled zero-framed input times the bare framing
    strut exponential."""
    imax = 2 * order
    _, g = lie_pair(label)
    if inp.is_builtin:
        base = _wheeled_omega(imax)
    else:
        base = balg.wheeling_inverse(load_knot_series(inp.knot, imax))
    y = base.union(_wheeled_omega(imax))
    y = y.union(_framing_series(Fraction(inp.framing), imax,
                                with_theta=False))
    fgv = hat_scalar(balg.fg_integral(y), g, order)
    theta_h = _theta_weight(label, order)
    factor = theta_h.scale(Fraction(3 * inp.sign - inp.framing, 48)).exp()
    out = _omega_pair_scalar(label, order) * factor * fgv
    return out.truncate(min(order, out.cap))


def unknot_qdata(label: str, cap: int) -> rootsys.ExponentialWeightSum:
    rs, _ = lie_pair(label)
    return rootsys.quantum_dim_sq_shifted(rs, cap)


def taupg_route(inp: SurgeryInput, label: str, order: int,
                qdata_path: str | None = None) -> HSeries:
    rs, _ = lie_pair(label)
    if qdata_path is not None:
        E = rootsys.ExponentialWeightSum.from_json(
            json.loads(Path(qdata_path).read_text()))
    elif inp.is_builtin:
        E = unknot_qdata(label, order)
    else:
        raise ValueError("file knots need companion expansion data "
                         "(--qdata) for the perturbative side")
    return rootsys.tau_pg(rs, E, inp.framing, order)


@dataclass
class ComparisonReport:
    lie: str
    knot: str
    framing: int
    order: int
    certified_order: int
    lmo_definition: HSeries
    lmo_lemma: HSeries
    routes_equal: bool
    h1_power: Fraction
    taupg: HSeries | None
    difference: HSeries | None
    equal: bool | None
    lmo_only: bool
    wheel_like_input: bool
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "lie": self.lie,
            "knot": self.knot,
            "framing": self.framing,
            "order": self.order,
            "certified_order": self.certified_order,
            "lmo_definition": self.lmo_definition.to_json(),
            "lmo_lemma": self.lmo_lemma.to_json(),
            "routes_equal": self.routes_equal,
            "h1_power": f"{self.h1_power.numerator}/{self.h1_power.denominator}",
            "taupg": None if self.taupg is None else self.taupg.to_json(),
            "difference": None if self.difference is None
            else self.difference.to_json(),
            "equal": self.equal,
            "lmo_only": self.lmo_only,
            "checks": self.checks,
        }


def compare(inp: SurgeryInput, label: str, order: int,
            qdata_path: str | None = None) -> ComparisonReport:
    """Both sides of the main equality at the requested order.

    Reported series are truncated to the certified order; coefficients
    the truncation bookkeeping cannot vouch for are never printed.
    """
    rs, g = lie_pair(label)
    certified = order
    wheel_like = True
    if not inp.is_builtin:
        s = load_knot_series(inp.knot, 2 * order)
        wheel_like = is_wheel_like(s)
        if inp.declared_valid_degree is not None:
            certified = min(certified, inp.declared_valid_degree)
        if not wheel_like:
            certified = 0  # no internal-vertex certificate for such inputs
    d = lmo_via_definition(inp, label, order).truncate(certified)
    l = lmo_via_lemma(inp, label, order).truncate(certified)
    routes_equal = d == l
    h1_power = Fraction(inp.h1_order) ** rs.num_pos
    lmo_only = not inp.is_builtin and qdata_path is None
    taupg = None
    difference = None
    equal = None
    if not lmo_only:
        taupg = taupg_route(inp, label, order, qdata_path).truncate(certified)
        difference = d - taupg.scale(h1_power)
        equal = difference.is_zero()
    return ComparisonReport(
        lie=label, knot=inp.knot, framing=inp.framing, order=order,
        certified_order=certified, lmo_definition=d, lmo_lemma=l,
        routes_equal=routes_equal, h1_power=h1_power, taupg=taupg,
        difference=difference, equal=equal, lmo_only=lmo_only,
        wheel_like_input=wheel_like)


# ---------------------------------------------------------------------------
# identity verification suite
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "detail": self.detail}


def _check_bernoulli(order: int) -> list[CheckResult]:
    out = [
        CheckResult("bernoulli.b2", modified_bernoulli(1) == Fraction(1, 48)),
        CheckResult("bernoulli.b4",
                    modified_bernoulli(2) == Fraction(-1, 5760)),
    ]
    cap = 12
    acc = HSeries.zero(cap)
    for m in range(1, cap // 2 + 1):
        acc = acc + HSeries.monomial(2 * modified_bernoulli(m), 2 * m, cap)
    round_trip = acc.exp() * sinh_ratio(1, cap).inverse()
    out.append(CheckResult("bernoulli.round_trip_x12",
                           round_trip == HSeries.one(cap)))
    return out


def _check_weyl(order: int) -> list[CheckResult]:
    out = []
    for label in LIE_LABELS:
        rep = rootsys.weyl_denominator(rootsys.build_root_system(label))
        out.append(CheckResult(f"weyl.denominator.{label}", rep.equal))
        out.append(CheckResult(f"weyl.denominator_squared.{label}",
                               rep.equal_squared))
    return out


def _check_theta(order: int) -> list[CheckResult]:
    out = []
    for label in ("A1", "A2"):
        rs, g = lie_pair(label)
        brute = liews.brute_force_contract(balg.theta(), g)
        expected = 24 * rs.norm_sq(rs.rho)
        got = brute.get((), Fraction(0))
        out.append(CheckResult(
            f"theta.brute_force.{label}", got == expected,
            f"value {got}, 24(rho,rho) = {expected}"))
        fast = liews.contract_diagram(balg.theta(), g)
        out.append(CheckResult(f"theta.contraction_agrees.{label}",
                               fast == brute))
    return out


def _check_omega(order: int) -> list[CheckResult]:
    n = max(order, 4)
    out = []
    for label in ("A1", "A2"):
        rs, g = lie_pair(label)
        lhs = _omega_pair_scalar(label, n)
        rhs = HSeries.one(n)
        for alpha in rs.pos_roots:
            rhs = rhs * sinh_ratio(rs.inner(rs.rho, alpha), n)
        out.append(CheckResult(f"omega.pair_vs_sinh.{label}", lhs == rhs,
                               f"to h^{n}"))
    return out


def _check_circle(order: int) -> list[CheckResult]:
    n = max(order, 4)
    out = []
    for label in ("A1",):
        _, g = lie_pair(label)
        oo_inv = _omega_pair_scalar(label, n).inverse()
        theta_h = _theta_weight(label, n)
        for s in (1, -1):
            ref = SurgeryInput("unknot", s)
            lhs = hat_scalar(balg.fg_integral(reduced_input(ref, 2 * n)),
                             g, n)
            rhs = oo_inv * theta_h.scale(Fraction(-s, 16)).exp()
            out.append(CheckResult(f"circle.reference_surgery.{label}.f={s}",
                                   lhs == rhs, f"to h^{n}"))
    return out


def _bridge_family(imax: int) -> dict[str, DiagramSeries]:
    w2 = series_of(balg.wheel(1), imax)
    w4 = series_of(balg.wheel(2), imax)
    return {
        "w2": w2,
        "w4": w4,
        "w2w2": w2.union(w2),
        "legged_w2_into_w4": balg.partial(w2, w4),
        "legged_w2_into_w2w2": balg.partial(w2, w2.union(w2)),
    }


def _check_bridge(order: int) -> list[CheckResult]:
    imax = 8
    cap = imax // 2
    out = []
    fam = _bridge_family(imax)
    for label in ("A1", "A2"):
        _, g = lie_pair(label)
        for name, y in fam.items():
            ok = True
            for f in (1, -1, 2, -2, 3):
                lhs = hat_scalar(balg.fg_integral(y, f_override=f), g, cap)
                rhs = liews.gaussian_eval(y, g, f, cap)
                ok = ok and lhs == rhs
            out.append(CheckResult(f"bridge.{label}.{name}", ok,
                                   "f in {1,-1,2,-2,3}"))
    return out


def _check_gauss(order: int) -> list[CheckResult]:
    """Gaussian contraction of the squared alternating Weyl sum, through
    the tensor machinery, against the closed product form."""
    cap = max(order, 6)
    out = []
    for label in ("A1", "A2"):
        rs, g = lie_pair(label)
        for f in (2, 3, -2):
            total = HSeries.zero(cap)
            for w, sw in rs.weyl:
                for w2, sw2 in rs.weyl:
                    beta = rootsys._add(rs.apply(w, rs.rho),
                                        rs.apply(w2, rs.rho))
                    vec = g.cartan_vector(beta)
                    tensor = liews.exp_tensor(g, vec, jmax=cap, cap=cap)
                    total = total + liews.wick(tensor, g, f).scale(sw * sw2)
            closed = rootsys.gaussian_weyl_closed_form(rs, f, cap)
            out.append(CheckResult(f"gauss.weyl_square.{label}.f={f}",
                                   total == closed))
            P = rs.num_pos
            lead = Fraction(rs.order) * Fraction(-1, f) ** P
            for alpha in rs.pos_roots:
                lead *= rs.inner(rs.rho, alpha)
            got = total.coeff(P) if P <= total.cap else None
            low_ok = all(total.coeff(k) == 0 for k in range(0, P))
            out.append(CheckResult(
                f"gauss.leading_term.{label}.f={f}",
                got == lead and low_ok,
                f"|W|(-h/f)^{P} prod (rho,alpha)"))
    return out


_SUITES = {
    "bernoulli": _check_bernoulli,
    "weyl": _check_weyl,
    "theta": _check_theta,
    "omega": _check_omega,
    "circle": _check_circle,
    "bridge": _check_bridge,
    "gauss": _check_gauss,
}


def verify_suite(selection: str, order: int = 4) -> list[CheckResult]:
    """Run the named identity suite ('all' runs every one of them)."""
    names = list(_SUITES) if selection == "all" else [selection]
    results: list[CheckResult] = []
    for name in names:
        if name not in _SUITES:
            raise ValueError(f"unknown suite {name!r}")
        results.extend(_SUITES[name](order))
    return results
