"""Degree-capped completion, reduction and C*-sound proof search.

The completion is the noncommutative Buchberger procedure: rules are oriented
by the degree-lexicographic order, overlaps between rule heads produce
critical pairs, and pairs are processed in order of overlap length so the
procedure can be stopped at any degree. Proof search alternates completion
with inference steps that are valid in every C*-algebra (``x*x = 0`` implies
``x = 0``) and, optionally, with the antipode of a compact matrix quantum
group.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .ncpoly import GeneratorSet, Poly, deglex_key, star_close


@dataclass(frozen=True)
class Caps:
    degree: int = 8
    rules: int = 20000

    def __post_init__(self):
        if self.degree < 1 or self.rules < 1:
            raise ValueError("caps must be positive")


@dataclass(frozen=True)
class RewriteStep:
    coeff: Fraction
    prefix: bytes
    lead: bytes
    suffix: bytes
    rhs: Poly


class RewriteSystem:
    """Oriented rules ``lead -> rhs`` with ``rhs`` strictly below ``lead``.

    Built incrementally by :meth:`add` and :meth:`complete`; once handed out by
    :func:`complete` it should be treated as read-only.
    """

    def __init__(self, gens: GeneratorSet, caps: Caps = Caps()):
        self.gens = gens
        self.caps = caps
        self.rules: dict[bytes, dict[bytes, Fraction]] = {}
        self._lengths: dict[int, int] = {}
        self._pending: list[Poly] = []
        self._pairs: list = []
        self._tick = itertools.count()
        self.truncated = False  # some pair above the degree cap was dropped
        self.rule_cap_hit = False
        self.inconsistent = False

    def __len__(self):
        return len(self.rules)

    @property
    def complete_below_cap(self) -> bool:
        return not self._pairs and not self._pending and not self.rule_cap_hit

    # -- reduction --------------------------------------------------------
    def _find(self, w: bytes):
        rules = self.rules
        if b"" in rules:
            return 0, b""
        lengths = sorted(self._lengths)
        n = len(w)
        for i in range(n):
            for L in lengths:
                if i + L > n:
                    break
                sub = w[i:i + L]
                if sub in rules:
                    return i, sub
        return None

    def reduce_terms(self, terms: dict, trace: list | None = None) -> dict:
        work = dict(terms)
        out = {}
        rules = self.rules
        while work:
            w = max(work, key=deglex_key)
            c = work.pop(w)
            hit = self._find(w)
            if hit is None:
                out[w] = c
                continue
            i, lead = hit
            pre, suf = w[:i], w[i + len(lead):]
            rhs = rules[lead]
            if trace is not None:
                trace.append(RewriteStep(c, pre, lead, suf, Poly._raw(dict(rhs))))
            for r, rc in rhs.items():
                nw = pre + r + suf
                v = work.get(nw, 0) + c * rc
                if v:
                    work[nw] = v
                else:
                    work.pop(nw, None)
        return out

    def reduce(self, p: Poly, trace: list | None = None) -> Poly:
        return Poly._raw(self.reduce_terms(p.terms, trace))

    # -- completion -------------------------------------------------------
    def add(self, polys: Iterable[Poly], star_closed: bool = False):
        polys = list(polys)
        if not star_closed:
            polys = star_close(polys, self.gens)
        self._pending.extend(polys)

    def _insert(self, terms: dict):
        lead = max(terms, key=deglex_key)
        c = terms[lead]
        rhs = {w: -v / c for w, v in terms.items() if w != lead}
        if not lead:
            self.inconsistent = True
        # heads that contain the new head are no longer reduced
        for other in [L for L in self.rules if len(L) > len(lead) and lead in L]:
            old = self.rules.pop(other)
            self._drop_length(len(other))
            back = dict(old)
            back = {w: -v for w, v in back.items()}
            back[other] = Fraction(1)
            self._pending.append(Poly._raw(back))
        self.rules[lead] = rhs
        self._lengths[len(lead)] = self._lengths.get(len(lead), 0) + 1
        for other in list(self.rules):
            self._queue_overlaps(lead, other)
            if other != lead:
                self._queue_overlaps(other, lead)
        if len(self.rules) > self.caps.rules:
            self.rule_cap_hit = True

    def _drop_length(self, L):
        self._lengths[L] -= 1
        if not self._lengths[L]:
            del self._lengths[L]

    def _queue_overlaps(self, a: bytes, b: bytes):
        la, lb = len(a), len(b)
        for k in range(1, min(la, lb)):
            if a[la - k:] == b[:k]:
                size = la + lb - k
                if size > self.caps.degree:
                    self.truncated = True
                    continue
                heapq.heappush(self._pairs, (size, next(self._tick), a, b, k))

    def _spoly(self, a: bytes, b: bytes, k: int) -> dict:
        # a = a' x, b = x b'  =>  a' rhs_b - rhs_a b'
        ra, rb = self.rules[a], self.rules[b]
        a_pre, b_suf = a[:len(a) - k], b[k:]
        d: dict[bytes, Fraction] = {}
        for w, c in rb.items():
            nw = a_pre + w
            d[nw] = d.get(nw, 0) + c
        for w, c in ra.items():
            nw = w + b_suf
            d[nw] = d.get(nw, 0) - c
        return {w: c for w, c in d.items() if c}

    def _drain_pending(self):
        while self._pending and not self.rule_cap_hit:
            p = self._pending.pop(0)
            r = self.reduce_terms(p.terms)
            if r:
                self._insert(r)

    def complete(self, upto: int | None = None) -> "RewriteSystem":
        """Process inputs and critical pairs with overlap length <= upto."""
        limit = self.caps.degree if upto is None else min(upto, self.caps.degree)
        self._drain_pending()
        while self._pairs and not self.rule_cap_hit:
            if self._pairs[0][0] > limit:
                break
            _, _, a, b, k = heapq.heappop(self._pairs)
            if a not in self.rules or b not in self.rules:
                continue
            s = self._spoly(a, b, k)
            if s:
                r = self.reduce_terms(s)
                if r:
                    self._insert(r)
                    self._drain_pending()
        self.interreduce()
        return self

    def interreduce(self):
        for lead in list(self.rules):
            rhs = self.rules.get(lead)
            if rhs is None:
                continue
            self.rules[lead] = self.reduce_terms(rhs)

    def rule_polys(self) -> list[Poly]:
        out = []
        for lead, rhs in self.rules.items():
            d = {w: -c for w, c in rhs.items()}
            d[lead] = Fraction(1)
            out.append(Poly._raw(d))
        return out

    def star(self) -> "RewriteSystem":
        """The system obtained by applying the involution to every rule."""
        other = RewriteSystem(self.gens, self.caps)
        other.add([p.star(self.gens) for p in self.rule_polys()], star_closed=True)
        return other.complete()


def complete(relations: Sequence[Poly], gens: GeneratorSet, caps: Caps = Caps()) -> RewriteSystem:
    """Degree-capped completion; check ``truncated``/``rule_cap_hit`` for flags."""
    system = RewriteSystem(gens, caps)
    system.add(relations)
    return system.complete()


def reduce(p: Poly, system: RewriteSystem) -> Poly:
    return system.reduce(p)


# ---------------------------------------------------------------------------
# antipode

def antipode_transform(r: Poly, gens: GeneratorSet, weights: Sequence[Fraction] | None = None) -> Poly:
    """Apply κ(q_ij) = (w_j / w_i) q_ji*, κ(q_ij*) = q_ji anti-multiplicatively.

    With no weights this is the plain unitary rule κ(q_ij) = q_ji*. Weights are
    the diagonal of the twisting matrix F in A_{u^t}(F).
    """
    if gens.layout is None:
        raise ValueError("antipode needs a matrix layout")
    layout = gens.layout
    images: dict[int, tuple[int, Fraction]] = {}
    for a in {x for w in r.words() for x in w}:
        g = a >> 1
        if g not in gens.position:
            raise ValueError(f"generator {gens.names[g]} is outside the matrix layout")
        i, j = gens.position[g]
        partner = gens.index[layout.names[j][i]]
        if gens.self_adjoint[g]:
            # magic-unitary entries: u_ij -> u_ji
            scale, letter = Fraction(1), 2 * partner
        elif a & 1:
            scale, letter = Fraction(1), 2 * partner
        else:
            scale = Fraction(1) if weights is None else Fraction(weights[j]) / Fraction(weights[i])
            letter = 2 * partner + (0 if gens.self_adjoint[partner] else 1)
        images[a] = (letter, scale)
    out: dict[bytes, Fraction] = {}
    for w, c in r.items():
        coeff = c
        letters = []
        for a in reversed(w):
            letter, scale = images[a]
            letters.append(letter)
            coeff *= scale
        nw = bytes(letters)
        v = out.get(nw, 0) + coeff
        if v:
            out[nw] = v
        else:
            out.pop(nw, None)
    return Poly._raw(out)


# ---------------------------------------------------------------------------
# proof search

PROVED = "Proved"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class InferenceStep:
    kind: str  # "R1", "R2", "R3"
    fact: Poly  # adjoined relation
    source: Poly  # x*x (R1), sum of squares (R2), or relation transformed (R3)


@dataclass
class ProofResult:
    status: str
    goal: Poly
    gens: GeneratorSet
    inferences: list[InferenceStep] = field(default_factory=list)
    rewrites: list[RewriteStep] = field(default_factory=list)
    antipode_used: bool = False
    degree_reached: int = 0
    rules: int = 0
    flags: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.status == PROVED

    def replay(self) -> Poly:
        """Re-apply the recorded rewrite steps to the goal; 0 for a valid proof."""
        cur = self.goal
        for st in self.rewrites:
            rule = Poly.word(st.lead) - st.rhs
            cur = cur - (Poly.word(st.prefix, st.coeff) * rule * Poly.word(st.suffix))
        return cur

    def facts(self) -> list[Poly]:
        return [s.fact for s in self.inferences]

    def rules_used(self) -> list[tuple[bytes, Poly]]:
        seen = {}
        for st in self.rewrites:
            seen.setdefault(st.lead, st.rhs)
        return list(seen.items())

    def certificate(self) -> list[dict]:
        g = self.gens
        out = [{"step": s.kind, "fact": g.format(s.fact), "from": g.format(s.source)}
               for s in self.inferences]
        out += [{"step": "rewrite", "coeff": str(st.coeff), "prefix": g.format_word(st.prefix),
                 "rule": f"{g.format_word(st.lead)} -> {g.format(st.rhs)}",
                 "suffix": g.format_word(st.suffix)} for st in self.rewrites]
        return out

    def to_json(self) -> dict:
        return {"status": self.status, "goal": self.gens.format(self.goal),
                "antipode_used": self.antipode_used, "degree_reached": self.degree_reached,
                "rules": self.rules, "flags": dict(self.flags), "certificate": self.certificate()}


def _square_root_word(w: bytes, gens: GeneratorSet) -> bytes | None:
    """Return x when w = x* x as words, else None."""
    n = len(w)
    if n == 0 or n % 2:
        return None
    x = w[n // 2:]
    if gens.star_word(x) == w[:n // 2]:
        return x
    return None


def _sum_of_squares(p: Poly, gens: GeneratorSet) -> list[bytes] | None:
    """If p = Σ c_i x_i* x_i with all c_i of one sign, return the words x_i."""
    signs = {c > 0 for c in p.terms.values()}
    if len(signs) != 1:
        return None
    roots = []
    for w in p.words():
        x = _square_root_word(w, gens)
        if x is None:
            return None
        roots.append(x)
    return roots


class Prover:
    """Saturating proof search over one presentation.

    Facts found for one goal are kept, so proving a list of goals against the
    same relations reuses all earlier work.
    """

    def __init__(self, relations: Sequence[Poly], gens: GeneratorSet, caps: Caps = Caps(),
                 use_cstar_inference: bool = True, use_antipode: bool = False,
                 antipode_weights: Sequence[Fraction] | None = None,
                 candidate_length: int = 2, start_degree: int = 2):
        if use_antipode and gens.layout is None:
            raise ValueError("antipode inference requires a matrix layout")
        self.gens = gens
        self.caps = caps
        self.use_cstar = use_cstar_inference
        self.use_antipode = use_antipode
        self.weights = antipode_weights
        self.relations = star_close(relations, gens)
        self.system = RewriteSystem(gens, caps)
        self.system.add(self.relations, star_closed=True)
        self.inferences: list[InferenceStep] = []
        self.degree = min(max(start_degree, 1), caps.degree)
        self._antipode_done: set = set()
        self._candidates = self._candidate_words(candidate_length)
        self.antipode_used = False

    def _candidate_words(self, length):
        letters = self.gens.letters()
        return [[bytes(t) for t in itertools.product(letters, repeat=L)]
                for L in range(1, length + 1)]

    # each inference round returns the number of new facts adjoined
    def _adjoin(self, fact: Poly, kind: str, source: Poly) -> bool:
        if not self.system.reduce(fact):
            return False
        self.inferences.append(InferenceStep(kind, fact, source))
        if kind == "R3":
            self.antipode_used = True
        self.system.add([fact])
        return True

    def _cstar_round(self) -> int:
        # cheapest facts first; the caller re-completes before the next round
        sysm = self.system
        new = 0
        for p in sysm.rule_polys():
            roots = _sum_of_squares(p, self.gens)
            if roots:
                for x in roots:
                    new += self._adjoin(Poly.word(x), "R2", p)
        if new:
            return new
        for group in self._candidates:
            for x in group:
                if not sysm.reduce(Poly.word(x)):
                    continue
                xx = Poly.word(self.gens.star_word(x) + x)
                if not sysm.reduce(xx):
                    new += self._adjoin(Poly.word(x), "R1", xx)
            if new:
                return new
        return new

    def _antipode_round(self) -> int:
        new = 0
        sources = list(self.relations) + [s.fact for s in self.inferences]
        sources = star_close(sources, self.gens)
        for r in sources:
            key = r.monic()
            if key in self._antipode_done:
                continue
            self._antipode_done.add(key)
            image = antipode_transform(r, self.gens, self.weights)
            new += self._adjoin(image, "R3", r)
        return new

    def _finish(self, goal, status, trace=None) -> ProofResult:
        return ProofResult(status, goal, self.gens, list(self.inferences), trace or [],
                           self.antipode_used, self.degree, len(self.system),
                           {"truncated": self.system.truncated,
                            "rule_cap_hit": self.system.rule_cap_hit,
                            "antipode_formula": self._formula()})

    def _formula(self):
        if not self.use_antipode:
            return None
        if self.weights is None:
            return "kappa(q_ij) = q_ji*"
        return "kappa(q_ij) = (f_j/f_i) q_ji*, f = " + ",".join(str(w) for w in self.weights)

    def _check(self, goal):
        trace: list[RewriteStep] = []
        if not self.system.reduce(goal, trace):
            return trace
        return None

    def prove(self, goal: Poly) -> ProofResult:
        if not goal:
            return self._finish(goal, PROVED)
        sysm = self.system
        while True:
            sysm.complete(self.degree)
            trace = self._check(goal)
            if trace is not None:
                return self._finish(goal, PROVED, trace)
            if sysm.inconsistent:
                # 1 = 0: the presented algebra is zero, every goal holds
                return self._finish(goal, PROVED, trace)
            if self.use_cstar and self._cstar_round():
                continue
            if self.use_antipode and self._antipode_round():
                continue
            if self.degree >= self.caps.degree or sysm.rule_cap_hit:
                return self._finish(goal, UNKNOWN)
            self.degree += 1

    def prove_all(self, goals: Iterable[Poly]) -> list[ProofResult]:
        return [self.prove(g) for g in goals]


def prove_zero(goal: Poly, relations: Sequence[Poly], gens: GeneratorSet, caps: Caps = Caps(),
               use_cstar_inference: bool = True, use_antipode: bool = False,
               antipode_weights=None, candidate_length: int = 2) -> ProofResult:
    """Try to show ``goal = 0`` in every C*-algebra satisfying ``relations``.

    ``Proved`` is sound; ``Unknown`` is inconclusive.
    """
    if use_antipode and gens.layout is None:
        raise ValueError("antipode inference requires a matrix layout")
    if not goal:
        return ProofResult(PROVED, goal, gens)
    prover = Prover(relations, gens, caps, use_cstar_inference, use_antipode=False,
                    candidate_length=candidate_length)
    result = prover.prove(goal)
    if result.proved or not use_antipode:
        return result
    prover = Prover(relations, gens, caps, use_cstar_inference, use_antipode=True,
                    antipode_weights=antipode_weights, candidate_length=candidate_length)
    return prover.prove(goal)
