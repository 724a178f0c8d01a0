"""Command line front end: validate instance files, run check suites, replay failures.

    kzlift validate FILE
    kzlift check SUITE [--doctrine joins] [--monad list] [--corpus posets:2] [--budget N]
                       [--seed S] [--max-instances K] [--instance FILE ...] [--format text|jsonl]
                       [--counterexamples DIR]
    kzlift replay FILE

Exit codes: 0 every check passed, 1 some check failed or errored, 2 bad
configuration or malformed input.
"""
from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .core2cat import FinCategory, all_functors
from .corpus import generate_corpus
from .errors import ConfigurationError, KZError, StructuralError
from .poset import DEFAULT_BUDGET, FinJoinLattice, FinPoset, Map, first_difference
from .report import ERROR, FAIL, INCONCLUSIVE, PASS, CheckRecord, Report, jsonable

SUITES = (
    "powerset", "sup-formula", "kz-axioms", "theta", "admissibility", "pseudomonad",
    "distlaw-assertions", "distlaw-algebraic", "lift", "lifted-doctrine", "uniqueness", "imkelly",
    "cocont-equiv", "yoneda-roundtrip", "doctrinal-adjunction", "locally-ff", "span", "multiadjoint",
)
FORMATS = ("text", "jsonl")
REGIMES = ("posetal", "finite-cat")


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    corpus: str = "posets:2"
    doctrine: str = "joins"
    monad: str = "list"
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    max_instances: int | None = None
    instances: tuple = ()
    regime: str = "posetal"
    format: str = "text"

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigurationError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.budget <= 0:
            raise ConfigurationError("budget must be positive")
        if self.max_instances is not None and self.max_instances <= 0:
            raise ConfigurationError("max-instances must be positive")
        if self.format not in FORMATS:
            raise ConfigurationError(f"unknown format {self.format!r}")
        if self.regime not in REGIMES:
            raise ConfigurationError(f"unknown regime {self.regime!r}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["instances"] = list(self.instances)
        return d


# shared plumbing


@dataclass
class Context:
    cfg: SuiteConfig
    rng: random.Random
    report: Report = field(default_factory=Report)

    @property
    def doctrine(self):
        from .kzdoctrine import doctrine_by_name
        return doctrine_by_name(self.cfg.doctrine, self.cfg.budget)

    @property
    def monad(self):
        from .pseudomonad import monad_by_name
        return monad_by_name(self.cfg.monad)

    def cap(self, items: list, default: int | None = None) -> list:
        """At most max_instances items (or the suite default), chosen by the seed, in original order."""
        limit = self.cfg.max_instances or default
        if limit is None or len(items) <= limit:
            return items
        keep = sorted(self.rng.sample(range(len(items)), limit))
        return [items[k] for k in keep]

    def guard(self, check: str, instance: str, fn):
        """Run fn(); a package error becomes an error record and the suite continues."""
        try:
            return fn()
        except KZError as e:
            self.report.add(check, False, instance, {"error": type(e).__name__, "message": str(e)},
                            status=ERROR)
            return None


def _raw_corpus(ctx: Context) -> list:
    if ctx.cfg.instances:
        from .instances import read_instance
        return [read_instance(path).value for path in ctx.cfg.instances]
    return generate_corpus(ctx.cfg.corpus)


def _posets(ctx: Context) -> list:
    out = []
    for x in _raw_corpus(ctx):
        if isinstance(x, FinCategory):
            if not x.is_posetal:
                raise ConfigurationError(f"suite {ctx.cfg.suite} needs posets; {x!r} is not posetal")
            x = x.to_preorder(quotient=True)
        if not isinstance(x, FinPoset):
            raise ConfigurationError(f"suite {ctx.cfg.suite} needs poset instances, got {type(x).__name__}")
        out.append(x)
    return out


def _categories(ctx: Context) -> list:
    out = []
    for x in _raw_corpus(ctx):
        if isinstance(x, FinPoset):
            x = FinCategory.from_poset(x)
        if not isinstance(x, FinCategory):
            raise ConfigurationError(f"suite {ctx.cfg.suite} needs category instances")
        out.append(x)
    return out


def _law(ctx: Context):
    from .distlaw import LambdaFamily
    return LambdaFamily(ctx.monad, ctx.doctrine)


def _algebras(ctx: Context, t) -> list:
    """(algebra, table, unit) for algebra instance files, else every ordered monoid on every nonempty poset."""
    from .pseudomonad import IdentityMonad, monoid_algebra, monotone_monoids
    if ctx.cfg.instances:
        from .instances import algebra_parts
        docs = [json.loads(Path(path).read_text()) for path in ctx.cfg.instances]
        if any(isinstance(d, dict) and "algebra" in d for d in docs):
            out = []
            for d in docs:
                if not (isinstance(d, dict) and "algebra" in d):
                    raise ConfigurationError(f"suite {ctx.cfg.suite} cannot mix algebra and other instances")
                P, table, unit, name = algebra_parts(d)
                out.append((monoid_algebra(t, P, table, unit, name or repr(P)), table, unit))
            return out
    out = []
    for P in _posets(ctx):
        if not P.elements():
            continue
        if isinstance(t, IdentityMonad):
            out.append((monoid_algebra(t, P, {}, None, repr(P)), None, None))
            continue
        for k, (table, unit) in enumerate(monotone_monoids(P)):
            out.append((monoid_algebra(t, P, table, unit, f"{P!r}#{k}"), table, unit))
    return out


def _lattice_algebra(t, alg):
    """The algebra with its carrier certified as a join lattice, or None."""
    from .pseudomonad import Algebra
    lat = FinJoinLattice.try_certify(alg.carrier)
    if lat is None:
        return None
    return Algebra(lat, Map(t.T(lat), lat, alg.structure, "x"), alg.name)


# suites


def suite_powerset(ctx: Context):
    from .kzdoctrine import complete_under_joins
    for P in _posets(ctx):
        elems = P.elements()
        if any(P.leq(a, b) for a in elems for b in elems if a != b):
            continue
        n = len(elems)
        L = complete_under_joins(P)
        down = L.elements()
        as_set = {D: frozenset(a for a in elems if L.member(a, D)) for D in down}
        subsets = {frozenset(c) for k in range(n + 1) for c in itertools.combinations(elems, k)}
        bij = len(down) == 2 ** n and set(as_set.values()) == subsets and len(set(as_set.values())) == len(down)
        order = all(L.leq(D, E) == (as_set[D] <= as_set[E]) for D in down for E in down)
        joins = all(as_set[L.join((D, E))] == as_set[D] | as_set[E] for D in down for E in down)
        ctx.report.add("powerset_isomorphism", bij and order and joins, repr(P),
                       None if bij and order and joins else {"size": len(down), "bijective": bij,
                                                             "order": order, "joins": joins},
                       detail={"size": len(down)})


def _small_lattices() -> list:
    lats = []
    for P in generate_corpus("posets:<=6"):
        lat = FinJoinLattice.try_certify(P)
        if lat is not None and lat.elements():
            lats.append(lat)
    return lats


def suite_sup_formula(ctx: Context):
    from .kzdoctrine import JoinCompletion, extend_along_unit
    from .poset import left_extension_search, random_monotone_map, universal_property_violation
    p = JoinCompletion(ctx.cfg.budget)
    lats = _small_lattices()
    samples = ctx.cfg.max_instances or 100
    for A in _posets(ctx):
        y = p.unit(A)
        PA = p.P(A)
        bad = None
        for k in range(samples):
            C = ctx.rng.choice(lats)
            F = random_monotone_map(A, C, ctx.rng, "F")
            R = extend_along_unit(F)
            found = left_extension_search(y, F)
            if found is None or first_difference(found[0], R) is not None:
                bad = {"sample": k, "F": F.table(), "target": repr(C),
                       "at": None if found is None else first_difference(found[0], R)}
                break
            cands = [R] + [random_monotone_map(PA, C, ctx.rng, "M") for _ in range(10)]
            G = universal_property_violation(R, F, y, cands)
            if G is not None:
                bad = {"sample": k, "F": F.table(), "target": repr(C), "M": G.table()}
                break
        ctx.report.add("sup_formula_matches_search", bad is None, repr(A), bad, detail={"samples": samples})


def suite_kz_axioms(ctx: Context):
    from .kzdoctrine import check_kz_doctrine_axioms
    ctx.report.extend(check_kz_doctrine_axioms(ctx.doctrine, _posets(ctx)))


def suite_theta(ctx: Context):
    from .kzdoctrine import theta_and_kz_check
    ctx.report.extend(theta_and_kz_check(ctx.doctrine, _posets(ctx)))


def suite_admissibility(ctx: Context):
    from .kzdoctrine import check_admissible
    from .poset import monotone_maps
    p = ctx.doctrine
    corpus = _posets(ctx)
    for A in corpus:
        for B in corpus:
            inst = f"{A!r} -> {B!r}"

            def run(A=A, B=B):
                n, bad = 0, None
                for L in monotone_maps(A, B, ctx.cfg.budget):
                    n += 1
                    if check_admissible(p, L, ctx.cfg.budget) is None:
                        bad = {"L": L.table()}
                        break
                return n, bad

            res = ctx.guard("admissible", inst, run)
            if res is not None:
                ctx.report.add("admissible", res[1] is None, inst, res[1], detail={"maps": res[0]})


def suite_pseudomonad(ctx: Context):
    from .pseudomonad import check_pseudomonad_axioms
    ctx.report.extend(check_pseudomonad_axioms(ctx.monad, _posets(ctx)))


def suite_distlaw_assertions(ctx: Context):
    from .distlaw import check_dist_law_assertions
    t, p = ctx.monad, ctx.doctrine
    corpus = _posets(ctx)
    rep = ctx.guard("law_component", repr(corpus), lambda: check_dist_law_assertions(t, p, _law(ctx), corpus))
    if rep is not None:
        ctx.report.extend(rep)


def suite_distlaw_algebraic(ctx: Context):
    from .distlaw import check_dist_law_algebraic, forced_cells
    t, p = ctx.monad, ctx.doctrine
    corpus = _posets(ctx)
    rep = ctx.guard("law_component", repr(corpus),
                    lambda: check_dist_law_algebraic(forced_cells(t, p, _law(ctx)), corpus))
    if rep is not None:
        ctx.report.extend(rep)


def suite_lift(ctx: Context):
    from .distlaw import day_convolution, downset_complex_multiplication
    from .kzdoctrine import JoinCompletion
    from .pseudomonad import ListMonad, check_algebra
    t, p = ctx.monad, ctx.doctrine
    lam = _law(ctx)
    oracle = isinstance(t, ListMonad) and type(p) is JoinCompletion
    for alg, table, unit in ctx.cap(_algebras(ctx, t)):
        inst = repr(alg)
        L = ctx.guard("lifted_algebra", inst, lambda alg=alg: day_convolution(t, p, lam, alg))
        if L is None:
            continue
        rep = check_algebra(t, L.algebra)
        ctx.report.add("lifted_algebra", rep.ok, inst, None if rep.ok else [r.as_dict() for r in rep.failures])
        if oracle:
            Z = downset_complex_multiplication(t, p, alg.carrier, lambda a, b, table=table: table[a, b], unit)
            d = first_difference(L.z, Z, t.points(L.algebra.carrier, 1))
            ctx.report.add("matches_complex_multiplication", d is None, inst, None if d is None else {"at": d})


def suite_lifted_doctrine(ctx: Context):
    from .distlaw import LiftedDoctrine, pseudo_morphisms
    t, p = ctx.monad, ctx.doctrine
    LD = LiftedDoctrine(t, p, _law(ctx))
    algs = [a for a, _, _ in ctx.cap(_algebras(ctx, t))]
    rep = ctx.guard("lifted_doctrine", "algebra corpus", lambda: LD.check_axioms(algs, []))
    if rep is not None:
        ctx.report.extend(rep)
    # composable pseudo morphisms A -> P(B) and B -> P(C), sampled
    triples = ctx.cap(list(itertools.product(algs, repeat=3)), 12)
    pairs = []
    for a, b, c in triples:
        Fs = pseudo_morphisms(t, a, LD.P(b).algebra, limit=2)
        Gs = pseudo_morphisms(t, b, LD.P(c).algebra, limit=2)
        pairs.extend(itertools.product(Fs, Gs))
    rep = ctx.guard("extensions_preserve_extensions", "sampled morphisms", lambda: LD.check_axioms([], pairs))
    if rep is not None:
        ctx.report.extend(rep)


def suite_uniqueness(ctx: Context):
    from .distlaw import (LambdaFamily, check_dist_law_assertions, check_dist_law_uniqueness,
                          lambda_from_free_algebra)
    t, p = ctx.monad, ctx.doctrine
    corpus = _posets(ctx)
    lam1 = _law(ctx)
    lam2 = LambdaFamily(t, p, lambda A: lambda_from_free_algebra(t, p, A), "reconstructed")
    for name, lam in (("computed", lam1), ("reconstructed", lam2)):
        rep = ctx.guard("law_passes_checker", name, lambda lam=lam: check_dist_law_assertions(t, p, lam, corpus))
        if rep is not None:
            ctx.report.add("law_passes_checker", rep.ok, name,
                           None if rep.ok else [r.as_dict() for r in rep.failures[:3]])
    same = ctx.guard("laws_agree", repr(corpus), lambda: check_dist_law_uniqueness(t, p, lam1, lam2, corpus))
    ctx.report.add("laws_agree", same is not None, repr(corpus), None if same is not None else "components differ")


def suite_imkelly(ctx: Context):
    from .distlaw import imkelly_equivalence
    t, p = ctx.monad, ctx.doctrine
    lam = _law(ctx)
    algs = [a for a, _, _ in _algebras(ctx, t)]
    targets = [b for b in (_lattice_algebra(t, a) for a in algs) if b is not None]
    for a, b in ctx.cap(list(itertools.product(algs, targets)), 150):
        rep = ctx.guard("imkelly", f"{a!r} -> {b!r}", lambda a=a, b=b: imkelly_equivalence(t, p, lam, a, b))
        if rep is not None:
            ctx.report.extend(rep)


def suite_cocont_equiv(ctx: Context):
    from .distlaw import classify_lifted_cocomplete, day_convolution, verify_cocontinuity_equivalence
    t, p = ctx.monad, ctx.doctrine
    lam = _law(ctx)
    algs = [a for a, _, _ in ctx.cap(_algebras(ctx, t))]
    maps = []
    for a in algs:
        L = ctx.guard("lifted_algebra", repr(a), lambda a=a: day_convolution(t, p, lam, a))
        if L is not None:
            maps.append((f"z {a!r}", L.z))
        la = _lattice_algebra(t, a)
        if la is not None:
            maps.append((f"x {a!r}", la.structure))
    rep = ctx.guard("cocontinuity_equivalence", "algebra corpus",
                    lambda: verify_cocontinuity_equivalence(t, p, maps))
    if rep is not None:
        ctx.report.extend(rep)
    tests = algs[:4]
    for a in algs:
        res = ctx.guard("classification_agrees", repr(a), lambda a=a: classify_lifted_cocomplete(t, p, lam, a, tests))
        if res is not None:
            rhs, lhs = res
            ctx.report.add("classification_agrees", rhs == lhs, repr(a),
                           None if rhs == lhs else {"characterisation": rhs, "direct": lhs},
                           detail={"cocomplete": lhs})


def _yoneda_instances(ctx: Context, t) -> list:
    """Pairs of structures on one carrier with the identity map, and every endomap of each algebra."""
    from .poset import monotone_maps
    algs = [a for a, _, _ in _algebras(ctx, t)]
    by_carrier: dict = {}
    for a in algs:
        by_carrier.setdefault(id(a.carrier), []).append(a)
    out = []
    for group in by_carrier.values():
        P = group[0].carrier
        for a, b in itertools.product(group, group):
            out.append((a, b, Map.identity(P, "id")))
        ends = list(monotone_maps(P, P))
        for a in group:
            out.extend((a, a, L) for L in ends if not all(L(x) == x for x in P.elements()))
    return ctx.cap(out)


def suite_yoneda_roundtrip(ctx: Context):
    from .yonedalift import check_yoneda_roundtrip, yoneda_setting
    t, p = ctx.monad, ctx.doctrine
    lam = _law(ctx)
    for a, b, L in _yoneda_instances(ctx, t):
        inst = f"{a!r} -> {b!r} along {L.table()!r}"
        s = ctx.guard("yoneda_roundtrip", inst, lambda a=a, b=b, L=L: yoneda_setting(t, p, lam, a, b, L))
        if s is not None:
            rep = ctx.guard("yoneda_roundtrip", inst, lambda s=s: check_yoneda_roundtrip(s))
            if rep is not None:
                ctx.report.extend(rep)


def suite_doctrinal_adjunction(ctx: Context):
    from .distlaw import LambdaFamily
    from .errors import PreconditionError
    from .kzdoctrine import IdentityDoctrine
    from .yonedalift import check_doctrinal_adjunction, yoneda_setting
    t = ctx.monad
    p = IdentityDoctrine()
    lam = LambdaFamily(t, p)
    skipped = 0
    for a, b, L in _yoneda_instances(ctx, t):
        inst = f"{a!r} -> {b!r} along {L.table()!r}"
        try:
            s = yoneda_setting(t, p, lam, a, b, L)
        except PreconditionError:
            skipped += 1
            continue
        rep = ctx.guard("doctrinal_adjunction", inst, lambda s=s: check_doctrinal_adjunction(s))
        if rep is not None:
            ctx.report.extend(rep)
    ctx.report.add("maps_without_right_adjoint", True, "identity doctrine", detail={"skipped": skipped})


def suite_locally_ff(ctx: Context):
    from .yonedalift import check_locally_ff_preservation
    t, p = ctx.monad, ctx.doctrine
    rep = ctx.guard("locally_ff", ctx.cfg.corpus,
                    lambda: check_locally_ff_preservation(t, p, _law(ctx), _posets(ctx)))
    if rep is not None:
        ctx.report.extend(rep)


def suite_span(ctx: Context):
    from .spanconv import (all_spans, check_span_laws, day_coend, feet, has_pullbacks, random_presheaf,
                           representable_composition_iso, transfer_lax_from_oplax, underlying_relation)
    bases = _categories(ctx)
    with_pb = [E for E in bases if has_pullbacks(E)]
    ctx.report.add("bases_with_pullbacks", True, ctx.cfg.corpus,
                   detail={"bases": len(bases), "with_pullbacks": len(with_pb)})
    if ctx.cfg.instances:
        for E in bases:
            if E not in with_pb:
                ctx.report.add("has_pullbacks", False, repr(E), {"base": repr(E)})
    pairs = ctx.cfg.max_instances or 2
    for E in with_pb:
        inst = repr(E)
        n, bad = 0, None
        for X, Y, Z in itertools.product(E.objects, repeat=3):
            for _ in range(pairs):
                F = random_presheaf(E, X, Y, ctx.rng)
                G = random_presheaf(E, Y, Z, ctx.rng)
                d = ctx.guard("convolution_matches_coend", inst, lambda F=F, G=G: day_coend(E, F, G))
                if d is None:
                    continue
                n += 1
                if not d.bijective and bad is None:
                    bad = {"feet": [X, Y, Z], "F": F.size(), "G": G.size(), "detail": d.counterexample}
        ctx.report.add("convolution_matches_coend", bad is None, inst, bad, detail={"pairs": n})
        spans = all_spans(E)
        failure, count = None, 0
        for u, v in itertools.product(spans, spans):
            if feet(E, u)[1] != feet(E, v)[0]:
                continue
            count += 1
            r = representable_composition_iso(E, u, v)
            if r is not None and failure is None:
                failure = {"u": repr(u), "v": repr(v), "failure": r}
        ctx.report.add("representable_composition_iso", failure is None, inst, failure, detail={"pairs": count})
        ctx.report.extend(check_span_laws(E, spans))
        if E.is_posetal:
            tr = ctx.guard("transfer", inst, lambda E=E: transfer_lax_from_oplax(underlying_relation(E)))
            if tr is not None:
                ctx.report.extend(tr.report)


def suite_multiadjoint(ctx: Context):
    from .fam import brute_force_right_adjoint, check_left_multiadjoint, fam_pi_functor
    if ctx.cfg.monad not in ("famSigma", "famPi", "list"):
        raise ConfigurationError("the multiadjoint suite runs the famSigma and famPi constructions")
    cats = _categories(ctx)
    for A in cats:
        for B in cats:
            inst = f"{A!r} -> {B!r}"
            counts = {"multiadjoint": 0, "not": 0, "inconclusive": 0}
            disagree, pi_fail = None, None
            for F in all_functors(A, B):
                r = check_left_multiadjoint(F)
                counts[r.status] += 1
                if r.status == "inconclusive":
                    continue
                bf = brute_force_right_adjoint(F) is not None
                if bf != r.ok and disagree is None:
                    disagree = {"functor": F.to_json(), "diers": r.status, "brute_force": bf}
                if r.ok and pi_fail is None:
                    rp = check_left_multiadjoint(fam_pi_functor(F), bound=None)
                    if not rp.ok:
                        pi_fail = {"functor": F.to_json(), "fam_pi": rp.status, "reason": rp.reason}
            ctx.report.add("agrees_with_brute_force", disagree is None, inst, disagree, detail=counts)
            if counts["multiadjoint"]:
                ctx.report.add("fam_pi_multiadjoint", pi_fail is None, inst, pi_fail)
            if counts["inconclusive"]:
                ctx.report.add("family_bound", False, inst, status=INCONCLUSIVE,
                               detail={"inconclusive_at_bound": 2, "functors": counts["inconclusive"]})


RUNNERS = {
    "powerset": suite_powerset, "sup-formula": suite_sup_formula, "kz-axioms": suite_kz_axioms,
    "theta": suite_theta, "admissibility": suite_admissibility, "pseudomonad": suite_pseudomonad,
    "distlaw-assertions": suite_distlaw_assertions, "distlaw-algebraic": suite_distlaw_algebraic,
    "lift": suite_lift, "lifted-doctrine": suite_lifted_doctrine, "uniqueness": suite_uniqueness,
    "imkelly": suite_imkelly, "cocont-equiv": suite_cocont_equiv, "yoneda-roundtrip": suite_yoneda_roundtrip,
    "doctrinal-adjunction": suite_doctrinal_adjunction, "locally-ff": suite_locally_ff, "span": suite_span,
    "multiadjoint": suite_multiadjoint,
}


def run_suite(cfg: SuiteConfig) -> Report:
    ctx = Context(cfg, random.Random(cfg.seed))
    RUNNERS[cfg.suite](ctx)
    return ctx.report


# output


def record_line(cfg: SuiteConfig | None, rec: CheckRecord) -> dict:
    out = {"suite": cfg.suite if cfg else None, **rec.as_dict()}
    if cfg is not None and rec.status in (FAIL, ERROR):
        out["replay"] = cfg.to_json()
    return out


def emit(report: Report, stream, fmt: str = "text", cfg: SuiteConfig | None = None) -> None:
    if fmt == "jsonl":
        for rec in report.records:
            stream.write(json.dumps(record_line(cfg, rec), sort_keys=True) + "\n")
        return
    for rec in report.records:
        line = f"{rec.status.upper():12} {rec.check}  [{rec.instance}]"
        if rec.counterexample is not None:
            line += f"  counterexample: {json.dumps(jsonable(rec.counterexample), sort_keys=True)}"
        stream.write(line + "\n")
    counts = report.summary()
    stream.write("summary: " + ", ".join(f"{k}={counts[k]}" for k in sorted(counts)) + "\n")


def exit_code(report: Report) -> int:
    return 1 if report.failures else 0


def write_counterexamples(cfg: SuiteConfig, report: Report, directory) -> list:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, rec in enumerate(report.failures):
        path = d / f"{cfg.suite}-{k:04d}.json"
        path.write_text(json.dumps(record_line(cfg, rec), sort_keys=True, indent=1) + "\n")
        paths.append(path)
    return paths


def replay(path) -> tuple[bool, dict]:
    """Rerun the recorded configuration and look for the same failing record."""
    text = Path(path).read_text().strip()
    try:
        docs = [json.loads(text)]
    except json.JSONDecodeError:
        docs = [json.loads(line) for line in text.splitlines() if line.strip()]
    docs = [d for d in docs if d.get("status") in (FAIL, ERROR)]
    if not docs:
        raise ConfigurationError(f"{path} holds no failing record")
    doc = docs[0]
    if "replay" not in doc:
        raise ConfigurationError(f"{path}: failing record has no replay configuration")
    conf = dict(doc["replay"])
    conf["instances"] = tuple(conf.get("instances", ()))
    cfg = SuiteConfig(**conf)
    report = run_suite(cfg)
    for rec in report.records:
        if rec.check == doc["check"] and rec.instance == doc["instance"]:
            again = record_line(cfg, rec)
            same = again["status"] == doc["status"] and again.get("counterexample") == doc.get("counterexample")
            return same, again
    return False, {}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="kzlift", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("validate", help="load and law-check an instance file")
    v.add_argument("file")
    c = sub.add_parser("check", help="run a named check suite")
    c.add_argument("suite")
    c.add_argument("--doctrine", default="joins")
    c.add_argument("--monad", default="list")
    c.add_argument("--corpus", default="posets:2")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--max-instances", type=int, default=None)
    c.add_argument("--instance", action="append", default=[])
    c.add_argument("--regime", default="posetal")
    c.add_argument("--format", default="text")
    c.add_argument("--counterexamples", default=None, help="directory for replayable failure files")
    r = sub.add_parser("replay", help="rerun a failure record and confirm it reproduces")
    r.add_argument("file")
    args = ap.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "validate":
            from .instances import read_instance, validate_instance
            rep = validate_instance(read_instance(args.file))
            emit(rep, out)
            return exit_code(rep)
        if args.command == "check":
            cfg = SuiteConfig(args.suite, args.corpus, args.doctrine, args.monad, args.budget, args.seed,
                              args.max_instances, tuple(args.instance), args.regime, args.format)
            rep = run_suite(cfg)
            emit(rep, out, cfg.format, cfg)
            if args.counterexamples:
                write_counterexamples(cfg, rep, args.counterexamples)
            return exit_code(rep)
        same, rec = replay(args.file)
        out.write(json.dumps({"reproduced": same, "record": rec}, sort_keys=True) + "\n")
        return 1 if same else 0
    except (ConfigurationError, StructuralError, json.JSONDecodeError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
