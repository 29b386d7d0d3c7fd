"""Root data of the even parts, dominance, the psi decompositions and Borel-Weil-Bott filtering.

Weights are vectors in the orthonormal basis (mu_1..mu_s, lambda_1..lambda_n);
the gl case has no lambda part and is treated through sl_n root data, so a
weight is only meaningful up to the trace character.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from superflag.errors import ExcludedCase, MaximalTypeViolation, NotDominant
from superflag.supercalc import Q

SO_EVEN = "so_even+sp"
SO_ODD = "so_odd+sp"
GL = "gl"
CASES = (SO_EVEN, SO_ODD, GL)


@dataclass(frozen=True)
class Weight:
    mu: Tuple = ()
    lam: Tuple = ()

    @classmethod
    def of(cls, s: int, n: int, mu: Dict[int, int] = None, lam: Dict[int, int] = None) -> "Weight":
        """Build from sparse 1-based coefficient maps."""
        m = [Q(0)] * s
        l_ = [Q(0)] * n
        for i, c in (mu or {}).items():
            m[i - 1] += c
        for i, c in (lam or {}).items():
            l_[i - 1] += c
        return cls(tuple(m), tuple(l_))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.mu, other.mu)),
                      tuple(a + b for a, b in zip(self.lam, other.lam)))

    def __sub__(self, other: "Weight") -> "Weight":
        return self + other.scale(-1)

    def scale(self, c) -> "Weight":
        return Weight(tuple(c * a for a in self.mu), tuple(c * a for a in self.lam))

    def dot(self, other: "Weight"):
        return sum((a * b for a, b in zip(self.mu + self.lam, other.mu + other.lam)), Q(0))

    def is_zero(self) -> bool:
        return not any(self.mu) and not any(self.lam)

    def is_integral(self) -> bool:
        return all(Q(a).denominator == 1 for a in self.mu + self.lam)

    def __str__(self):
        parts = []
        for name, vec in (("mu", self.mu), ("lambda", self.lam)):
            for i, c in enumerate(vec, start=1):
                if not c:
                    continue
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                coef = "" if mag == 1 else f"{mag}*"
                parts.append(f"{sign}{coef}{name}_{i}")
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def to_json(self):
        return {"mu": [str(c) for c in self.mu], "lambda": [str(c) for c in self.lam]}


@dataclass(frozen=True)
class RootSystemCase:
    case: str
    params: Tuple[int, ...]
    positive_roots: Tuple[Weight, ...]
    simple_roots: Tuple[Weight, ...]

    @property
    def s(self) -> int:
        return self.params[0]

    @property
    def n(self) -> int:
        return self.params[1] if len(self.params) > 1 else 0

    def zero(self) -> Weight:
        return Weight.of(self.s, self.n)

    def rho(self) -> Weight:
        total = self.zero()
        for a in self.positive_roots:
            total = total + a
        return total.scale(Q(1, 2))

    def to_json(self):
        return {"case": self.case, "params": list(self.params),
                "positive_roots": [str(a) for a in self.positive_roots],
                "simple_roots": [str(a) for a in self.simple_roots]}


def build_root_system(case: str, params: Sequence[int]) -> RootSystemCase:
    """Positive and simple roots exactly as fixed for each even part."""
    if case == GL:
        (n,) = params
        w = lambda mu: Weight.of(n, 0, mu)
        pos = [w({i: 1, j: -1}) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        simple = [w({i: 1, i + 1: -1}) for i in range(1, n)]
        return RootSystemCase(GL, (n,), tuple(pos), tuple(simple))
    s, n = params
    w = lambda mu=None, lam=None: Weight.of(s, n, mu, lam)
    pos, simple = [], []
    for i in range(1, s + 1):
        for j in range(i + 1, s + 1):
            pos.append(w({i: 1, j: -1}))
            pos.append(w({i: 1, j: 1}))
    if case == SO_ODD:
        pos += [w({i: 1}) for i in range(1, s + 1)]
        simple += [w({i: 1, i + 1: -1}) for i in range(1, s)]
        if s >= 1:
            simple.append(w({s: 1}))
    elif case == SO_EVEN:
        simple += [w({i: 1, i + 1: -1}) for i in range(1, s)]
        if s >= 2:
            simple.append(w({s - 1: 1, s: 1}))
    else:
        raise ValueError(f"unknown root system case {case!r}")
    for p in range(1, n + 1):
        for q in range(p + 1, n + 1):
            pos.append(w(lam={p: 1, q: -1}))
        for q in range(p, n + 1):
            pos.append(w(lam={p: 2} if p == q else {p: 1, q: 1}))
    simple += [w(lam={j: 1, j + 1: -1}) for j in range(1, n)]
    if n >= 1:
        simple.append(w(lam={n: 2}))
    return RootSystemCase(case, (s, n), tuple(pos), tuple(simple))


def is_dominant(wt: Weight, rs: RootSystemCase) -> bool:
    return all(wt.dot(a) >= 0 for a in rs.positive_roots)


def dominance_detail(wt: Weight, rs: RootSystemCase) -> List[Tuple[str, str]]:
    return [(str(a), str(wt.dot(a))) for a in rs.positive_roots]


def weyl_dimension(hw: Weight, rs: RootSystemCase) -> int:
    """prod over positive roots of (hw + rho, a) / (rho, a)."""
    if not hw.is_integral():
        raise NotDominant(f"{hw} is not integral")
    if not is_dominant(hw, rs):
        raise NotDominant(f"{hw} is not dominant")
    rho = rs.rho()
    num = Q(1)
    for a in rs.positive_roots:
        num *= (hw + rho).dot(a) / rho.dot(a)
    if num.denominator != 1:
        raise NotDominant(f"Weyl product for {hw} is not an integer")  # pragma: no cover
    return int(num)


# ---------------------------------------------------------------------------
# decompositions


@dataclass
class RepDecomposition:
    case: str  # "even" or "odd"
    k1: int
    l1: int
    root_system: RootSystemCase
    summands: List[Tuple[Weight, str]] = field(default_factory=list)

    def weights(self) -> List[Weight]:
        return [w for w, _ in self.summands]


def _root_system_for(case: str, k1: int, l1: int) -> RootSystemCase:
    if case == "even":
        return build_root_system(SO_EVEN, (k1, l1))
    if case == "odd":
        return build_root_system(GL, (k1 + l1,))
    raise ValueError(f"case must be 'even' or 'odd', got {case!r}")


def psi_decomposition(case: str, k1: int, l1: int) -> RepDecomposition:
    """Highest weights of the isotropy representation on the fibre's vector fields.

    The even form lives on so_{2k1} + sp_{2l1}, the odd form on gl_n with
    n = k1 + l1.
    """
    if k1 < 0 or l1 < 0 or k1 + l1 < 1:
        raise ValueError("need k1, l1 >= 0 and k1 + l1 >= 1")
    rs = _root_system_for(case, k1, l1)
    if case == "even":
        W = lambda mu=None, lam=None: Weight.of(k1, l1, mu, lam)
        if l1 == 0:
            return RepDecomposition(case, k1, l1, rs, [(W({1: 1, k1: -1}), "Ad1")])
        if k1 == 0:
            return RepDecomposition(case, k1, l1, rs, [(W(lam={1: 1, l1: -1}), "Ad2")])
        out = []
        if k1 > 1:
            out.append((W({1: 1, k1: -1}), "Ad1"))
        out.append((W({1: 1}, {l1: -1}), "rho1 x rho2*"))
        out.append((W({k1: -1}, {1: 1}), "rho1* x rho2"))
        if l1 > 1:
            out.append((W(lam={1: 1, l1: -1}), "Ad2"))
        out.append((W(), "1"))
        return RepDecomposition(case, k1, l1, rs, out)
    # odd form: gl_n with GL_{l1} on indices 1..l1 and GL_{k1} on l1+1..n
    n = k1 + l1
    W = lambda mu: Weight.of(n, 0, mu)
    if l1 == 0 or k1 == 0:
        return RepDecomposition(case, k1, l1, rs, [(W({1: 1, n: -1}), "Ad1" if l1 == 0 else "Ad2")])
    out = []
    if k1 > 1:
        out.append((W({l1 + 1: 1, n: -1}), "Ad1"))
    out.append((W({l1 + 1: 1, 1: 1}), "rho1 x rho2"))
    out.append((W({n: -1, l1: -1}), "rho1* x rho2*"))
    if l1 > 1:
        out.append((W({1: 1, l1: -1}), "Ad2"))
    out.append((W({}), "1"))
    return RepDecomposition(case, k1, l1, rs, out)


def bwb_sections(rep: RepDecomposition, rs: Optional[RootSystemCase] = None) -> List[Tuple[Weight, str]]:
    """Dominant summands: by Borel-Weil-Bott these give the global sections."""
    rs = rs or rep.root_system
    return [(w, lab) for w, lab in rep.summands if is_dominant(w, rs)]


def expected_ambient_n(case: str, k1: int, l1: int) -> int:
    return 2 * l1 if case == "even" else k1 + l1


def sections_report(case: str, k1: int, l1: int, n: Optional[int] = None) -> Dict:
    """Global sections of the zeroth graded piece: modules and dimensions per branch."""
    if k1 < 1 or l1 < 1:
        raise MaximalTypeViolation("need k1 >= 1 and l1 >= 1")
    expected = expected_ambient_n(case, k1, l1)
    if n is not None and n != expected:
        raise MaximalTypeViolation(
            f"maximal type needs n = {expected} for case {case} with k1={k1}, l1={l1}, got {n}")
    if k1 == 1 and l1 == 1:
        raise ExcludedCase("k1 = l1 = 1 is excluded: the fibre carries non-constant functions")
    rep = psi_decomposition(case, k1, l1)
    rs = rep.root_system
    dominant = bwb_sections(rep, rs)
    modules = []
    for w, lab in dominant:
        modules.append({"highest_weight": str(w), "label": lab, "coordinates": w.to_json(),
                        "dimension": weyl_dimension(w, rs)})
    if case == "even":
        branch = "k1>2" if k1 > 2 else ("k1=2" if k1 == 2 else "k1=1,l1>1")
    else:
        branch = "k1>1,l1>1" if k1 > 1 and l1 > 1 else ("k1=1,l1>1" if k1 == 1 else "k1>1,l1=1")
    notes = []
    if case == "even" and k1 == 2:
        notes.append("r1 read as so4+sp module with trivial sp factor (sp highest weight 0)")
    if case == "even" and k1 == 1:
        notes.append("r2 highest weight taken from the proof bullets (lambda_1 - mu_1); so2 factor is one-dimensional")
    if case == "odd":
        notes.append("gl_n weights read modulo the trace character (sl_n root data)")
    return {
        "case": case, "k1": k1, "l1": l1, "n": expected, "branch": branch,
        "root_system": rs.to_json(),
        "psi_highest_weights": [{"weight": str(w), "label": lab,
                                 "dominant": is_dominant(w, rs),
                                 "pairings": dominance_detail(w, rs)} for w, lab in rep.summands],
        "dominant": [m["highest_weight"] for m in modules],
        "modules": modules,
        "total_dimension": sum(m["dimension"] for m in modules),
        "notes": notes,
    }


__all__ = [
    "Weight", "RootSystemCase", "RepDecomposition", "build_root_system", "is_dominant",
    "weyl_dimension", "psi_decomposition", "bwb_sections", "sections_report", "SO_EVEN",
    "SO_ODD", "GL", "dominance_detail", "expected_ambient_n",
]
