"""Non-left-orderability evidence: certificates, coset enumeration, torsion.

Three routes: the sign-deduction certificate for cycle-form presentations,
HLT coset enumeration to witness finite groups, and torsion of a known
cyclic (or lens-space connected-sum) cover.  A bounded positive-cone
search is included as a generic brute-force obstruction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .rewrite import (FreeWord, format_word, parse_word, x_sym,
                      verify_lemma_x, verify_lemma_left, verify_lemma_right,
                      verify_product_relation, QR)
from .diagram import DecoratedCycleGraph, cycle_graph_from_params
from .presentation import cycle_presentation, relator_sets_equal

VERDICT_CERTIFIED = "NonLO_Certified"
VERDICT_FINITE = "NonLO_FiniteGroup"
VERDICT_TORSION = "NonLO_Torsion"
VERDICT_ALTERNATING = "NonLO_Alternating"
VERDICT_INCONCLUSIVE = "Inconclusive"


class HypothesisNotMet(Exception):
    pass


class SoundnessError(Exception):
    pass


@dataclass
class Verdict:
    kind: str
    justification: str
    machine_checked: bool = True

    def to_json(self):
        return {"verdict": self.kind, "justification": self.justification,
                "machine_checked": self.machine_checked}


# ---------------------------------------------------------------------------
# Coset enumeration (HLT with coincidence handling).
# ---------------------------------------------------------------------------

class Exhausted(Exception):
    """Coset cap hit; inconclusive, never an answer."""


@dataclass
class CosetTable:
    generators: tuple
    complete: bool
    order: int
    table: tuple          # live rows, standardized numbering
    cosets_defined: int

    def trace(self, start, word):
        col = {g: 2 * i for i, g in enumerate(self.generators)}
        cur = start
        for sym, s in word.letters:
            cur = self.table[cur][col[sym] + (0 if s == 1 else 1)]
        return cur

    def is_trivial(self, word):
        """Word problem oracle; valid because the table is the regular action."""
        if not self.complete:
            raise SoundnessError("incomplete table cannot decide the word problem")
        return self.trace(0, word) == 0

    def dump(self):
        head = "coset " + " ".join("%4s %4s^-1" % (g, g) for g in self.generators)
        lines = [head]
        for i, row in enumerate(self.table):
            lines.append("%5d " % i + " ".join("%4d" % x for x in row))
        return "\n".join(lines) + "\n"


def todd_coxeter(p, max_cosets=10 ** 6):
    """Enumerate cosets of the trivial subgroup; deterministic HLT strategy.

    Returns a complete CosetTable or raises Exhausted at the coset cap.
    """
    gens = tuple(p.generators)
    ncols = 2 * len(gens)
    col = {g: 2 * i for i, g in enumerate(gens)}

    def encode(w):
        return tuple(col[sym] + (0 if s == 1 else 1) for sym, s in w.letters)

    relators = [encode(r) for r in p.relators if r]
    table = [[None] * ncols]
    parent = [0]

    def rep(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def define(alpha, x):
        if len(table) >= max_cosets:
            raise Exhausted("coset cap %d reached" % max_cosets)
        beta = len(table)
        table.append([None] * ncols)
        parent.append(beta)
        table[alpha][x] = beta
        table[beta][x ^ 1] = alpha
        return beta

    def merge(k, lam, queue):
        k, lam = rep(k), rep(lam)
        if k != lam:
            mu, nu = min(k, lam), max(k, lam)
            parent[nu] = mu
            queue.append(nu)

    def coincidence(alpha, beta):
        queue = []
        merge(alpha, beta, queue)
        qi = 0
        while qi < len(queue):
            gamma = queue[qi]
            qi += 1
            for x in range(ncols):
                delta = table[gamma][x]
                if delta is None:
                    continue
                table[delta][x ^ 1] = None
                mu, nu = rep(gamma), rep(delta)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] is not None:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(alpha, word):
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    alpha = 0
    while alpha < len(table):
        if rep(alpha) != alpha:
            alpha += 1
            continue
        for w in relators:
            if not w:
                continue
            scan_and_fill(alpha, w)
            if rep(alpha) != alpha:
                break
        if rep(alpha) == alpha:
            for x in range(ncols):
                if table[alpha][x] is None:
                    define(alpha, x)
        alpha += 1

    live = [i for i in range(len(table)) if rep(i) == i]
    # compress to live cosets, then standardize by scan order
    index = {c: i for i, c in enumerate(live)}
    rows = [[index[rep(table[c][x])] for x in range(ncols)] for c in live]
    rows = _standardize(rows, ncols)
    return CosetTable(gens, True, len(live), tuple(tuple(r) for r in rows),
                      len(table))


def _standardize(rows, ncols):
    """Renumber cosets in order of first appearance row by row."""
    order = {0: 0}
    new_to_old = [0]
    i = 0
    while i < len(new_to_old):
        old = new_to_old[i]
        for x in range(ncols):
            t = rows[old][x]
            if t not in order:
                order[t] = len(order)
                new_to_old.append(t)
        i += 1
    assert len(new_to_old) == len(rows)
    return [[order[t] for t in rows[old]] for old in new_to_old]


# ---------------------------------------------------------------------------
# Torsion and positive-cone obstructions.
# ---------------------------------------------------------------------------

def torsion_non_lo(inv, cyclic_known):
    """Torsion verdict for covers known to be lens spaces (cyclic groups)."""
    if not cyclic_known:
        return Verdict(VERDICT_INCONCLUSIVE,
                       "abelianization alone does not obstruct orderability",
                       machine_checked=False)
    if inv.rank:
        return Verdict(VERDICT_INCONCLUSIVE, "infinite first homology",
                       machine_checked=False)
    order = inv.order()
    if order == 1:
        return Verdict(VERDICT_TORSION,
                       "trivial fundamental group, not left-orderable by convention")
    return Verdict(VERDICT_TORSION,
                   "nontrivial finite cyclic fundamental group Z/%d" % order)


@dataclass
class PositiveConeWitness:
    generators: tuple
    derivations: dict    # sign assignment -> word reaching the identity

    def to_json(self):
        return {"generators": list(self.generators),
                "derivations": {"".join("+" if s > 0 else "-" for s in key):
                                format_word(w, fold=False)
                                for key, w in self.derivations.items()}}


def positive_cone_search(p, oracle, depth=8, gens=None):
    """Breadth-first closure of each signed generator semigroup.

    Returns a PositiveConeWitness when every sign assignment produces a
    nonempty product equal to the identity within `depth`; None otherwise
    (inconclusive).  `oracle` decides triviality of words.
    """
    gens = tuple(gens if gens is not None else p.generators)
    derivations = {}
    for signs in itertools.product((1, -1), repeat=len(gens)):
        found = None
        frontier = [FreeWord.gen(g, s) for g, s in zip(gens, signs)]
        seen = set(frontier)
        for w in frontier:
            if oracle(w):
                found = w
                break
        length = 1
        while found is None and length < depth:
            nxt = []
            for w in frontier:
                for g, s in zip(gens, signs):
                    w2 = w * FreeWord.gen(g, s)
                    if w2 in seen:
                        continue
                    seen.add(w2)
                    if oracle(w2):
                        found = w2
                        break
                    nxt.append(w2)
                if found is not None:
                    break
            frontier = nxt
            length += 1
        if found is None:
            return None
        derivations[signs] = found
    return PositiveConeWitness(gens, derivations)


# ---------------------------------------------------------------------------
# The cycle-form certificate.
# ---------------------------------------------------------------------------

@dataclass
class SignStep:
    element: FreeWord
    sign: int
    rule: str
    premises: tuple = ()
    payload: dict = field(default_factory=dict)

    def to_json(self):
        out = {"element": format_word(self.element, fold=False),
               "sign": "+" if self.sign > 0 else "-",
               "rule": self.rule, "premises": list(self.premises)}
        if self.payload:
            out["payload"] = self.payload
        return out


@dataclass
class NonLOCertificate:
    m: int
    a: tuple
    b: tuple
    case: int
    wlog: dict
    steps: list
    contradiction: tuple

    def to_json(self):
        return {"params": {"m": self.m, "a": list(self.a), "b": list(self.b)},
                "case": self.case,
                "hypothesis": self.wlog,
                "steps": [s.to_json() for s in self.steps],
                "contradiction": list(self.contradiction)}


def _mixed_sign_vertices(g):
    out = set()
    for v in g.vertices:
        signs = set()
        for i, end in g.rotations[v]:
            signs.add(g.edges[i][2])
        if signs == {1, -1}:
            out.add(v)
    return out


def _wlog_record(d):
    """The extremal-candidate predicate: only y0 and y_cn see mixed signs."""
    g = cycle_graph_from_params(d.m, d.a, d.b)
    mixed = _mixed_sign_vertices(g)
    want = {"y0", "y%d" % d.cn}
    return {"mixed_sign_vertices": sorted(mixed),
            "expected": sorted(want),
            "ok": mixed == want,
            "branch": "y0 < 1 < y%d (the opposite order reduces to this one "
                      "by order reversal)" % d.cn}


def certify_cycle_non_lo(d):
    """Build the non-left-orderability certificate for a cycle-form graph.

    Requires n >= 1 and the hypothesis (m > 1, or m = 1 with a0, an > 1);
    every word identity is discharged by the lemma replay machinery and
    every sign is a product of previously established signs.
    """
    if d.n < 1:
        raise HypothesisNotMet("degenerate cycle (n = 0)")
    if not d.hypothesis_ok():
        raise HypothesisNotMet("need m > 1, or m = 1 with a0 > 1 and an > 1")
    m, a, b = d.m, d.a, d.b
    cn = d.cn
    wlog = _wlog_record(d)
    if not wlog["ok"]:
        raise SoundnessError("extremal-candidate predicate failed")
    y0 = FreeWord.gen("y0")
    ycn = FreeWord.gen("y%d" % cn)
    x1 = FreeWord.gen(x_sym(1, m, cn))
    xm1 = FreeWord.gen(x_sym(m - 1, m, cn))
    q_left = x1 * y0 ** (a[0] - 1)
    r_right = ycn ** (a[-1] - 1) * xm1

    # the left-lemma product forces x1 y0^(a0-1) to be positive
    _, left_words = verify_lemma_left(d)
    verify_product_relation(d)
    _, right_words = verify_lemma_right(d)

    steps = [
        SignStep(y0, -1, "wlog"),
        SignStep(ycn, +1, "wlog"),
        SignStep(y0.inverse(), +1, "sign_inverse", (0,)),
        SignStep(q_left, +1, "product_forces_positive", (0,),
                 {"via": "lemma_left", "strict": "y0"}),
    ]
    if m > 1:
        case = 1
        verify_lemma_x(m, cn)
        factors = [format_word(q_left, fold=False)] + \
                  [format_word(y0.inverse(), fold=False)] * (a[0] - 1)
        steps.append(SignStep(x1, +1, "product_of_positives", (3, 2),
                              {"factors": factors}))
        factors = [format_word(ycn, fold=False)] * (a[-1] - 1)
        for _ in range(m - 2):
            factors.append(format_word(x1, fold=False))
            factors.append(format_word(y0.inverse(), fold=False))
        factors.append(format_word(x1, fold=False))
        steps.append(SignStep(r_right, +1, "product_of_positives", (1, 4, 2),
                              {"factors": factors, "via": "lemma_x"}))
        rstep = 5
    else:
        case = 2
        # x1 is an alias of y_cn here, which is positive by assumption;
        # x1 y0 dominates x1 y0^(a0-1) because y0 is negative
        steps.append(SignStep((x1 * y0), +1, "reduce_negative_power", (3, 0),
                              {"prefix": format_word(x1, fold=False),
                               "g": "y0", "k": a[0] - 1}))
        factors = [format_word(ycn, fold=False)] * (a[-1] - 2) + \
                  [format_word(x1 * y0, fold=False)]
        steps.append(SignStep(r_right, +1, "product_of_positives", (1, 4),
                              {"factors": factors}))
        rstep = 5
    # lemma right writes y0 as a positive word in y_cn and r_right
    w0 = right_words[0]
    factors = []
    for sym, s in w0.letters:
        if s != 1:
            raise SoundnessError("right word for y0 is not positive")
        factors.append(format_word(ycn if sym != QR else r_right, fold=False))
    steps.append(SignStep(y0, +1, "product_of_positives", (1, rstep),
                          {"factors": factors, "via": "lemma_right",
                           "marker_word": format_word(w0, fold=False)}))
    cert = NonLOCertificate(m, a, b, case, wlog, steps, (0, len(steps) - 1))
    ok, problems = verify_certificate(cert.to_json(), cycle_presentation(d))
    if not ok:
        raise SoundnessError("freshly built certificate failed recheck: %s" % problems)
    return cert


def verify_certificate(cert_json, pres):
    """Recheck a certificate against a presentation, from the JSON alone.

    Re-derives every lemma fact from the parameters, re-checks every sign
    inference, and confirms the contradiction.  Returns (ok, problems).
    """
    problems = []
    try:
        params = cert_json["params"]
        d = DecoratedCycleGraph(params["m"], tuple(params["a"]), tuple(params["b"]))
    except Exception as e:
        return False, ["bad parameters: %s" % e]
    if not relator_sets_equal(pres, cycle_presentation(d)):
        problems.append("presentation does not match the certificate parameters")
    if d.n < 1 or not d.hypothesis_ok():
        problems.append("hypothesis fails for the stated parameters")
    m, a, cn = d.m, d.a, d.cn
    y0 = FreeWord.gen("y0")
    ycn = FreeWord.gen("y%d" % cn)
    x1 = FreeWord.gen(x_sym(1, m, cn))
    xm1 = FreeWord.gen(x_sym(m - 1, m, cn))
    try:
        _, left_words = verify_lemma_left(d)
        verify_product_relation(d)
        _, right_words = verify_lemma_right(d)
        lemx = verify_lemma_x(m, cn) if m > 1 else None
    except Exception as e:
        return False, ["lemma replay failed: %s" % e]

    try:
        steps = []
        for js in cert_json["steps"]:
            steps.append((parse_word(js["element"]), 1 if js["sign"] == "+" else -1,
                          js["rule"], tuple(js["premises"]), js.get("payload", {})))
    except Exception as e:
        return False, ["malformed steps: %s" % e]

    def positive_premise(word, upto):
        return any(steps[i][0] == word and steps[i][1] == 1
                   for i in range(upto))

    for idx, (element, sign, rule, premises, payload) in enumerate(steps):
        if any(p >= idx or p < 0 for p in premises):
            problems.append("step %d cites an out-of-range step" % idx)
            continue
        try:
            _check_step(problems, d, cert_json, steps, idx, element, sign,
                        rule, premises, payload, positive_premise,
                        left_words, right_words, lemx)
        except Exception as e:
            problems.append("step %d: malformed (%s)" % (idx, e))

    try:
        i, j = cert_json["contradiction"]
        if not (steps[i][0] == steps[j][0] and steps[i][1] == -steps[j][1]):
            problems.append("no contradiction between steps %d and %d" % (i, j))
    except Exception as e:
        problems.append("malformed contradiction: %s" % e)
    return not problems, problems


def _check_step(problems, d, cert_json, steps, idx, element, sign, rule,
                premises, payload, positive_premise, left_words, right_words,
                lemx):
    m, a, cn = d.m, d.a, d.cn
    y0 = FreeWord.gen("y0")
    ycn = FreeWord.gen("y%d" % cn)
    x1 = FreeWord.gen(x_sym(1, m, cn))
    xm1 = FreeWord.gen(x_sym(m - 1, m, cn))
    if rule == "wlog":
        predicate = _wlog_record(d)
        if not (predicate["ok"] and cert_json["hypothesis"].get("ok")):
            problems.append("wlog predicate not established")
        if not ((element == y0 and sign == -1) or (element == ycn and sign == 1)):
            problems.append("step %d: wlog only fixes y0 < 1 < y_cn" % idx)
    elif rule == "sign_inverse":
        i = premises[0]
        if steps[i][0].inverse() != element or steps[i][1] != -sign:
            problems.append("step %d: bad inversion" % idx)
    elif rule == "product_forces_positive":
        # w0 ... wn = 1 with every w_k positive over {y0, qL} and y0
        # strictly negative somewhere, so qL must be positive
        if element != x1 * y0 ** (a[0] - 1):
            problems.append("step %d: element is not x1 y0^(a0-1)" % idx)
        if not any(s[0] == y0 and s[1] == -1 for s in steps[:idx]):
            problems.append("step %d: needs y0 negative" % idx)
        prod = FreeWord()
        for k, wk in enumerate(left_words):
            if not wk.is_positive():
                problems.append("left word %d not positive" % k)
            prod = prod * wk ** a[k]
        if prod.count("y0") == 0:
            problems.append("step %d: no strict factor in the product" % idx)
        if sign != 1:
            problems.append("step %d: wrong sign" % idx)
    elif rule == "product_of_positives":
        factors = [parse_word(f) for f in payload.get("factors", [])]
        if not factors:
            problems.append("step %d: empty product" % idx)
        for f in factors:
            if not positive_premise(f, idx):
                problems.append("step %d: factor %s not established positive"
                                % (idx, format_word(f, fold=False)))
        prod = FreeWord()
        for f in factors:
            prod = prod * f
        via = payload.get("via")
        if via is None:
            if prod != element:
                problems.append("step %d: factors do not multiply to the element" % idx)
        elif via == "lemma_x":
            want = ycn ** (a[-1] - 1) * lemx.results[x_sym(m - 1, m, cn)]
            if prod != want or element != ycn ** (a[-1] - 1) * xm1:
                problems.append("step %d: lemma-x discharge failed" % idx)
        elif via == "lemma_right":
            w0 = right_words[0]
            r_right = ycn ** (a[-1] - 1) * xm1
            expected = [ycn if sym != QR else r_right for sym, _ in w0.letters]
            if element != y0 or not w0.is_positive() or factors != expected:
                problems.append("step %d: lemma-right discharge failed" % idx)
        else:
            problems.append("step %d: unknown discharge %r" % (idx, via))
        if sign != 1:
            problems.append("step %d: wrong sign" % idx)
    elif rule == "reduce_negative_power":
        prefix = parse_word(payload["prefix"])
        gword = FreeWord.gen(payload["g"])
        k = payload["k"]
        if k < 1:
            problems.append("step %d: needs exponent >= 1" % idx)
        i, j = premises
        if steps[i][0] != prefix * gword ** k or steps[i][1] != 1:
            problems.append("step %d: dominating element missing" % idx)
        if steps[j][0] != gword or steps[j][1] != -1:
            problems.append("step %d: negative base missing" % idx)
        if element != prefix * gword or sign != 1:
            problems.append("step %d: wrong conclusion" % idx)
    else:
        problems.append("step %d: unknown rule %r" % (idx, rule))


