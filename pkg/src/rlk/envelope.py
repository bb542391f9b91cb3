"""Two-sided module theory for restricted brackets and its word envelope.

A module over a bracket algebra g carries per-basis action matrices for
[e_i, m] (left) and [m, e_i] (right), extended linearly in the g argument.
Three compatibility identities tie the actions to the bracket — one for each
slot the module element can occupy inside a nested bracket — and a restricted
module additionally satisfies: acting by x^[p] on the right equals the p-fold
right action by x.

The same conditions can be phrased as operator identities in the free unital
word algebra on 2·dim(g) letters (letter i acts as [e_i, -], letter dim+i as
[-, e_i], words compose as m·(uv) = (m·u)·v):

- r_[x,y] = r_x r_y - r_y r_x          (right bracket compatibility)
- l_[x,y] = l_x r_y - r_y l_x          (left bracket compatibility)
- (r_y + l_y) l_x = 0                  (mixed annihilation)
- r_{x^[p]} = r_x^p                    (p-power compatibility)

The first two signs are derived from the module identities; a variant with
both composites subtracted is available behind a flag for demonstration, and
is genuinely different (nonzero residual on small fixtures in odd
characteristic).  `ulp_truncated` divides the degree-truncated word algebra
by the two-sided ideal these relations span; `module_roundtrip` turns a
module into a word action, confirms every relation acts as zero, and reads
the module back bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra_core import Algebra, operator_power
from .errors import UsageError
from .free_structures import (
    QuotientPresentation,
    _pmap_instances,
    truncated_ideal_quotient,
    word_ambient,
)
from .identities import (
    WITNESS_LIMIT,
    Coverage,
    CheckReport,
    Witness,
    _grid,
    _report,
    check_leibniz,
    check_restricted_leibniz,
)

MODULE_AXIOMS = ("m_first", "m_middle", "m_last")


@dataclass
class LeibnizModule:
    """Module carrier: left_action[i] realizes m -> [e_i, m] and
    right_action[i] realizes m -> [m, e_i], both in column convention."""

    over: Algebra
    mdim: int
    left_action: np.ndarray
    right_action: np.ndarray
    label: str = ""

    def __post_init__(self):
        p, n = self.over.p, self.over.dim
        if self.mdim < 0:
            raise UsageError(f"module dimension must be >= 0, got {self.mdim}")
        shape = (n, self.mdim, self.mdim)
        for name in ("left_action", "right_action"):
            mats = np.asarray(getattr(self, name), dtype=np.int64) % p
            if mats.shape != shape:
                raise UsageError(
                    f"{name} must have shape {shape}, got {mats.shape}"
                )
            setattr(self, name, mats)

    def left_of(self, x) -> np.ndarray:
        """Matrix of m -> [x, m] for x given in coordinates."""
        v = np.asarray(tuple(x), dtype=np.int64) % self.over.p
        return np.einsum("i,ijk->jk", v, self.left_action) % self.over.p

    def right_of(self, x) -> np.ndarray:
        """Matrix of m -> [m, x] for x given in coordinates."""
        v = np.asarray(tuple(x), dtype=np.int64) % self.over.p
        return np.einsum("i,ijk->jk", v, self.right_action) % self.over.p

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return (
            f"LeibnizModule(over={self.over.label!r}, mdim={self.mdim}{tag})"
        )


def adjoint_module(g: Algebra, bracket: str = "bracket") -> LeibnizModule:
    """g acting on itself: left_action[i] = [e_i, -], right_action[i] = [-, e_i]."""
    c = g.structure(bracket)
    left = np.transpose(c, (0, 2, 1)) % g.p
    right = np.transpose(c, (1, 2, 0)) % g.p
    return LeibnizModule(g, g.dim, left, right, label=f"adjoint({g.label})")


def zero_module(g: Algebra, mdim: int) -> LeibnizModule:
    zeros = np.zeros((g.dim, mdim, mdim), dtype=np.int64)
    return LeibnizModule(g, mdim, zeros, zeros.copy(),
                         label=f"zero{mdim}({g.label})")


def check_module_axioms(g: Algebra, M: LeibnizModule,
                        bracket: str = "bracket") -> CheckReport:
    """The three nested-bracket identities, one per module slot, on all basis
    pairs of g with every module basis vector covered through the matrices:

    - m first:  [m,[x,y]] = [[m,x],y] - [[m,y],x]
    - m middle: [x,[m,y]] = [[x,m],y] - [[x,y],m]
    - m last:   [x,[y,m]] = [[x,y],m] - [[x,m],y]
    """
    if M.over is not g:
        raise UsageError("module is attached to a different algebra")
    base = check_leibniz(g, bracket)
    if not base.ok():
        raise UsageError(
            f"underlying bracket fails its identity (witness {base.witnesses[:1]})"
        )
    p, n = g.p, g.dim
    witnesses, failures, count = [], 0, 0
    for i in range(n):
        Li, Ri = M.left_action[i], M.right_action[i]
        for j in range(n):
            Lj, Rj = M.left_action[j], M.right_action[j]
            br = g.multiply(bracket, g.basis(i), g.basis(j))
            Lbr, Rbr = M.left_of(br), M.right_of(br)
            sides = {
                "m_first": (Rbr, (Rj @ Ri - Ri @ Rj) % p),
                "m_middle": ((Li @ Rj) % p, (Rj @ Li - Lbr) % p),
                "m_last": ((Li @ Lj) % p, (Lbr - Rj @ Li) % p),
            }
            for name in MODULE_AXIOMS:
                lhs, rhs = sides[name]
                count += M.mdim
                bad = np.nonzero(((lhs - rhs) % p).any(axis=0))[0]
                failures += bad.shape[0]
                for m in bad[:WITNESS_LIMIT]:
                    if len(witnesses) < WITNESS_LIMIT:
                        witnesses.append(
                            Witness(
                                (name, i, j, int(m)),
                                tuple(int(v) for v in lhs[:, m] % p),
                                tuple(int(v) for v in rhs[:, m] % p),
                            )
                        )
    return _report("module_axioms", witnesses, failures,
                   Coverage("exhaustive", count))


def check_restricted_module(g: Algebra, M: LeibnizModule,
                            pmap: str = "frobenius", bracket: str = "bracket",
                            cap=None, seed: int = 0,
                            samples: int = 400) -> CheckReport:
    """right_of(x^[p]) equals right_of(x)^p as matrices, swept over elements
    of g (the p-map is not linear, so basis pairs do not suffice)."""
    base = check_module_axioms(g, M, bracket)
    if not base.ok():
        raise UsageError(
            f"module identities fail (witness {base.witnesses[:1]})"
        )
    X, coverage = _grid(g, cap, seed, samples)
    p = g.p
    witnesses, failures = [], 0
    for row in X:
        x = tuple(int(v) for v in row)
        lhs = M.right_of(g.apply_pmap(pmap, x))
        rhs = operator_power(M.right_of(x), p, p)
        if not np.array_equal(lhs, rhs):
            failures += 1
            if len(witnesses) < WITNESS_LIMIT:
                witnesses.append(Witness((x,), lhs, rhs))
    return _report("restricted_module", witnesses, failures, coverage)


# -- relation words ------------------------------------------------------------


def _relation_terms(g: Algebra, pmap: str, bracket: str, printed_signs: bool,
                    cap, seed, samples):
    """The four relation families as (tag, key, [(word, coeff), ...]) triples,
    in letter convention: letter i = left action of e_i, letter n+i = right.
    Bilinear families are instantiated on basis pairs, the p-power family on
    enumerated or sampled elements of g."""
    p, n = g.p, g.dim
    sign = -1 if printed_signs else 1
    out = []
    for i in range(n):
        for j in range(n):
            br = g.multiply(bracket, g.basis(i), g.basis(j))
            rbr = [((n + k,), c % p) for k, c in enumerate(br) if c % p]
            lbr = [((k,), c % p) for k, c in enumerate(br) if c % p]
            out.append(("r_bracket", (i, j),
                        rbr + [((n + i, n + j), -1), ((n + j, n + i), sign)]))
            out.append(("l_bracket", (i, j),
                        lbr + [((i, n + j), -1), ((n + j, i), sign)]))
            out.append(("l_kills_symmetrized", (i, j),
                        [((n + j, i), 1), ((j, i), 1)]))
    instances, note = _pmap_instances(g, cap, seed, samples)
    for x in instances:
        x = tuple(int(v) for v in x)
        terms = [((n + k,), c % p) for k, c in enumerate(g.apply_pmap(pmap, x))
                 if c % p]
        support = [(k, v % p) for k, v in enumerate(x) if v % p]
        power = {(): 1}
        for _ in range(p):
            nxt = {}
            for word, cw in power.items():
                for k, v in support:
                    key = word + (n + k,)
                    nxt[key] = (nxt.get(key, 0) + cw * v) % p
            power = {w: c for w, c in nxt.items() if c}
        terms += [(w, (-c) % p) for w, c in power.items()]
        out.append(("r_power", (x,), terms))
    return out, note


def ulp_relations_check(g: Algebra, M: LeibnizModule,
                        pmap: str = "frobenius", bracket: str = "bracket",
                        printed_signs: bool = False, cap=None, seed: int = 0,
                        samples: int = 400) -> CheckReport:
    """Each relation word family, evaluated as operators on the module and
    asserted zero.  With printed_signs=True both composites of the two
    bracket-compatibility relations are subtracted, which is inconsistent
    with the module identities and fails on small fixtures in odd
    characteristic."""
    if M.over is not g:
        raise UsageError("module is attached to a different algebra")
    p = g.p
    mats = np.concatenate([M.left_action, M.right_action]) % p
    terms, note = _relation_terms(g, pmap, bracket, printed_signs, cap, seed,
                                  samples)
    witnesses, failures = [], 0
    eye = np.eye(M.mdim, dtype=np.int64)
    for tag, key, words in terms:
        op = np.zeros((M.mdim, M.mdim), dtype=np.int64)
        for word, coeff in words:
            acc = eye
            for letter in word:
                acc = (mats[letter] @ acc) % p
            op = (op + coeff * acc) % p
        if op.any():
            failures += 1
            if len(witnesses) < WITNESS_LIMIT:
                witnesses.append(Witness((tag,) + key, op,
                                         np.zeros_like(op)))
    notes = ("printed signs" if printed_signs else "derived signs", note)
    return _report("ulp_relations", witnesses, failures,
                   Coverage("exhaustive", len(terms)), notes)


def ulp_truncated(g: Algebra, pmap: str = "frobenius", d: int = None,
                  bracket: str = "bracket", cap=None, seed: int = 0,
                  samples: int = 64) -> QuotientPresentation:
    """Degree-truncated word envelope: the free unital word algebra on
    2·dim(g) letters divided by the two-sided ideal of the four relation
    families (derived signs)."""
    d = g.p if d is None else d
    if d < g.p:
        raise UsageError(
            f"degree cap {d} is below the characteristic {g.p}"
        )
    rep = check_restricted_leibniz(g, bracket, pmap, cap=cap, seed=seed)
    if not rep.ok():
        raise UsageError(
            f"input is not restricted Leibniz (witness {rep.witnesses[:1]})"
        )
    W = word_ambient(2 * g.dim, d, g.p, label=f"ul_words({g.label})")
    terms, note = _relation_terms(g, pmap, bracket, False, cap, seed, samples)
    rels = []
    for _tag, _key, words in terms:
        rel = {}
        for word, coeff in words:
            if len(word) > d:
                continue
            k = W.index[word]
            v = (rel.get(k, 0) + coeff) % g.p
            if v:
                rel[k] = v
            else:
                rel.pop(k, None)
        if rel:
            rels.append(rel)
    notes = (
        f"letters 0..{g.dim - 1} act on the left, "
        f"{g.dim}..{2 * g.dim - 1} on the right",
        note,
    )
    return truncated_ideal_quotient(W, rels, notes=notes)


def module_roundtrip(g: Algebra, M: LeibnizModule, pmap: str = "frobenius",
                     bracket: str = "bracket", cap=None, seed: int = 0,
                     samples: int = 64) -> CheckReport:
    """Module -> word action -> module.  The word action sends letter i to
    left_action[i] and letter n+i to right_action[i], composed in reading
    order; every relation word must act as the zero operator, and the
    single-letter words must read the original module back bit-exactly."""
    base = check_restricted_module(g, M, pmap, bracket, cap=cap, seed=seed)
    if not base.ok():
        raise UsageError(
            f"module is not restricted (witness {base.witnesses[:1]})"
        )
    p, n = g.p, g.dim
    mats = np.concatenate([M.left_action, M.right_action]) % p
    eye = np.eye(M.mdim, dtype=np.int64)

    def act(word):
        acc = eye
        for letter in word:
            acc = (mats[letter] @ acc) % p
        return acc

    terms, note = _relation_terms(g, pmap, bracket, False, cap, seed, samples)
    witnesses, failures, count = [], 0, 0
    for tag, key, words in terms:
        count += 1
        op = np.zeros((M.mdim, M.mdim), dtype=np.int64)
        for word, coeff in words:
            op = (op + coeff * act(word)) % p
        if op.any():
            failures += 1
            if len(witnesses) < WITNESS_LIMIT:
                witnesses.append(Witness(("relation", tag) + key, op,
                                         np.zeros_like(op)))
    for i in range(n):
        for tag, original, letter in (
            ("left", M.left_action[i], (i,)),
            ("right", M.right_action[i], (n + i,)),
        ):
            count += 1
            back = act(letter)
            if not np.array_equal(back, original % p):
                failures += 1
                if len(witnesses) < WITNESS_LIMIT:
                    witnesses.append(Witness(("readback", tag, i), back,
                                             original % p))
    return _report("module_roundtrip", witnesses, failures,
                   Coverage("exhaustive", count), (note,))
