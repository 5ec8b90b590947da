import pathlib
from fractions import Fraction

import pytest

from arithplane import density as dn
from arithplane import spectrum as sp
from arithplane.errors import ExprSyntaxError, UnknownFieldError
from arithplane.lattice import load_lattice
from arithplane.sieve import stream_primes

CONFIG_DIR = pathlib.Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(scope="module")
def demo():
    return load_lattice((CONFIG_DIR / "demo.cfg").read_text())


def expr(demo, text):
    return dn.parse_set_expr(text, demo)


# ------------------------------------------------------------------ parser


def test_parse_structure(demo):
    e = expr(demo, "Psi(Qi/Q) & !Psi(Qs2/Q)")
    assert isinstance(e.node, dn.And)
    assert isinstance(e.node.left, dn.PsiAtom)
    assert isinstance(e.node.right, dn.Not)
    assert e.base.name == "Q"
    assert len(e.atoms()) == 2


def test_parse_precedence(demo):
    # ! binds tighter than &, which binds tighter than |
    e = expr(demo, "Pi(Qi/Q) | Pi(Qs2/Q) & !Pi(Qc2/Q)")
    assert isinstance(e.node, dn.Or)
    assert isinstance(e.node.right, dn.And)
    assert isinstance(e.node.right.right, dn.Not)
    f = expr(demo, "(Pi(Qi/Q) | Pi(Qs2/Q)) & Pi(Qc2/Q)")
    assert isinstance(f.node, dn.And)
    assert isinstance(f.node.left, dn.Or)


def test_parse_relative_base(demo):
    e = expr(demo, "Pi(Q8/Qi)")
    assert e.base.name == "Qi"
    assert e.atoms()[0].ext.name == "Q8/Qi"


def test_parse_prime_set(demo):
    e = expr(demo, "{5, 3, 5}")
    assert e.node == dn.PrimeSet((3, 5))
    assert e.base.name == "Q"  # pure prime sets default to the rational base


def test_parse_errors(demo):
    with pytest.raises(ExprSyntaxError, match="mixed base"):
        expr(demo, "Psi(Qi/Q) & Pi(Q8/Qi)")
    with pytest.raises(ExprSyntaxError, match="position 11"):
        expr(demo, "Psi(Qi/Q) &")
    with pytest.raises(ExprSyntaxError, match="not prime"):
        expr(demo, "{4}")
    with pytest.raises(ExprSyntaxError, match="unexpected character"):
        expr(demo, "Psi(Qi/Q) + Pi(Qi/Q)")
    with pytest.raises(ExprSyntaxError):
        expr(demo, "Psi(Qi/Q) Pi(Qs2/Q)")  # trailing garbage
    with pytest.raises(ExprSyntaxError):
        expr(demo, "")
    with pytest.raises(UnknownFieldError):
        expr(demo, "Psi(Nope/Q)")


# ------------------------------------------------------- density estimates


def test_density_psi_quadratic(demo):
    est = dn.estimate_density(expr(demo, "Psi(Qi/Q)"), 10**4)
    assert abs(est.value - 0.5) < 0.02
    # the trace tightens through the checkpoints
    by_bound = {row.bound: row for row in est.trace}
    assert abs(by_bound[1000].density - 0.5) < 0.05
    assert abs(by_bound[10**4].density - 0.5) < 0.02


def test_density_trace_is_cumulative(demo):
    est = dn.estimate_density(expr(demo, "Pi(Qc2/Q)"), 5000)
    assert [r.bound for r in est.trace] == [100, 1000, 5000]
    hits = [r.hits for r in est.trace]
    totals = [r.total for r in est.trace]
    assert hits == sorted(hits) and totals == sorted(totals)
    assert est.trace[-1].hits == est.hits and est.trace[-1].total == est.total
    assert abs(est.value - 2 / 3) < 0.03


def test_density_skips_are_counted(demo):
    est = dn.estimate_density(expr(demo, "Psi(Qi/Q)"), 1000)
    assert est.skipped == (("ramified", 1),)  # just p = 2
    assert est.total == 167  # 168 odd primes minus the skip... 167 evaluable
    est2 = dn.estimate_density(expr(demo, "Psi(Qi/Q) & Psi(Qw/Q)"), 1000)
    assert est2.skipped == (("ramified", 2),)  # p = 2 and p = 3
    assert est2.total == 166


def test_density_csv_golden(demo):
    est = dn.estimate_density(expr(demo, "Psi(Qi/Q)"), 100)
    assert dn.trace_csv(est) == "N,hits,total,density\n100,11,24,0.458333\n"


def test_density_prime_set(demo):
    est = dn.estimate_density(expr(demo, "{5}"), 1000)
    assert (est.hits, est.total) == (1, 168)
    comp = dn.estimate_density(expr(demo, "!{5}"), 1000)
    assert (comp.hits, comp.total) == (167, 168)


def test_density_worker_parity(demo):
    e = expr(demo, "Psi(Qi/Q) | Pi(Qc2/Q)")
    one = dn.estimate_density(e, 20000, workers=1)
    three = dn.estimate_density(e, 20000, workers=3)
    assert one == three
    assert dn.trace_csv(one) == dn.trace_csv(three)


def test_density_relative_base(demo):
    # points of Sp_Qi counted by norm: split primes give two degree-1 points,
    # inert primes one norm-p^2 point
    est = dn.estimate_density(expr(demo, "Pi(Q8/Qi)"), 2000)
    split = sum(1 for p in stream_primes(2000) if p % 4 == 1)
    inert = sum(1 for p in stream_primes(44) if p % 4 == 3)
    assert est.total == 2 * split + inert
    assert est.skipped == (("ramified", 1),)
    assert abs(est.value - 0.5) < 0.05


def test_density_bound_validation(demo):
    with pytest.raises(ValueError):
        dn.estimate_density(expr(demo, "Psi(Qi/Q)"), 50)


# ------------------------------------------------------------- chebotarev


@pytest.mark.parametrize(
    "text,want",
    [
        ("Psi(Qi/Q)", Fraction(1, 2)),
        ("Psi(Qc2/Q)", Fraction(1, 6)),
        ("Pi(Qc2/Q)", Fraction(2, 3)),
        ("Pi(Qc2/Q) & !Psi(Qc2/Q)", Fraction(1, 2)),
        ("Psi(Qi/Q) & Psi(Qs2/Q)", Fraction(1, 4)),
        ("Psi(Qi/Q) | Psi(Qs2/Q)", Fraction(3, 4)),
        ("Psi(Q8/Q)", Fraction(1, 4)),
        ("Pi(Q8/Qi)", Fraction(1, 2)),
        ("Pi(S3c/Qc2)", Fraction(1, 2)),
        ("!Pi(Qc2/Q)", Fraction(1, 3)),
        ("Psi(Qi/Q) | {5}", Fraction(1, 2)),
        ("{3, 7}", Fraction(0)),
        ("!{3, 7}", Fraction(1)),
    ],
)
def test_chebotarev_predictions(demo, text, want):
    assert dn.chebotarev_predict(expr(demo, text), demo) == want


def test_chebotarev_psi_is_reciprocal_closure_degree(demo):
    for name in ("Qi", "Qs2", "Qw", "Q8", "Qc2", "S3c"):
        closure = demo.field(demo.closure_of(name))
        got = dn.chebotarev_predict(expr(demo, f"Psi({name}/Q)"), demo)
        assert got == Fraction(1, closure.degree)


def test_chebotarev_unavailable():
    bare = load_lattice("field K\n  poly -2 0 1\n")
    e = dn.parse_set_expr("Pi(K/Q)", bare)
    assert dn.chebotarev_predict(e, bare) is None


def test_chebotarev_unavailable_mixed_closures(demo):
    # Qi and Qc2 have closures, but no declared field contains both
    e = expr(demo, "Psi(Qi/Q) & Psi(Qc2/Q)")
    assert dn.chebotarev_predict(e, demo) is None


def test_chebotarev_matches_estimates(demo):
    for text in ("Psi(Qc2/Q)", "Pi(Qc2/Q)", "Psi(Qi/Q) & Psi(Qs2/Q)"):
        e = expr(demo, text)
        predicted = dn.chebotarev_predict(e, demo)
        measured = dn.estimate_density(e, 10**4).value
        assert abs(measured - float(predicted)) < 0.03, text


# -------------------------------------------------------------- frobenius


def test_frobenius_cubic(demo):
    stats = dn.frobenius_histogram(demo.field("Qc2"), 10**4)
    freqs = stats.frequencies()
    assert set(freqs) == {(1, 1, 1), (1, 2), (3,)}
    assert abs(freqs[(1, 1, 1)] - 1 / 6) < 0.03
    assert abs(freqs[(1, 2)] - 1 / 2) < 0.03
    assert abs(freqs[(3,)] - 1 / 3) < 0.03
    assert sum(c for _, c in stats.counts) == stats.total


def test_frobenius_quadratic_and_trivial(demo):
    stats = dn.frobenius_histogram(demo.field("Qi"), 10**4)
    freqs = stats.frequencies()
    assert abs(freqs[(1, 1)] - 0.5) < 0.03 and abs(freqs[(2,)] - 0.5) < 0.03
    only = dn.frobenius_histogram(demo.field("Q"), 1000)
    assert only.frequencies() == {(1,): 1.0}


def test_frobenius_full_split_matches_psi_exactly(demo):
    # same primes, same counts: (1,...,1) patterns are precisely Psi hits
    for name, n in (("Qc2", 3000), ("Qi", 3000)):
        stats = dn.frobenius_histogram(demo.field(name), n)
        est = dn.estimate_density(dn.parse_set_expr(f"Psi({name}/Q)", demo), n)
        pattern = tuple([1] * demo.field(name).degree)
        assert dict(stats.counts)[pattern] == est.hits
        assert stats.total == est.total


def test_frobenius_worker_parity(demo):
    one = dn.frobenius_histogram(demo.field("Qc2"), 20000, workers=1)
    three = dn.frobenius_histogram(demo.field("Qc2"), 20000, workers=3)
    assert one == three


# ---------------------------------------------------------------- checkers


def test_psi_product(demo):
    report = dn.check_psi_product(demo, "Qi", "Qs2", "Q8", "Q", 10**4)
    assert report.ok and report.violations == ()
    assert report.total == 1228  # odd primes up to 10^4
    assert abs(report.density - 0.25) < 0.02
    trivial = dn.check_psi_product(demo, "Qi", "Qi", "Qi", "Q", 2000)
    assert trivial.ok


def test_psi_product_membership_witness(demo):
    # 17 = 1 mod 8 lies in all three Psi sets
    (p17,) = sp.split_prime(demo.field("Q"), 17)
    for top in ("Qi", "Qs2", "Q8"):
        assert sp.in_psi(demo.extension((top, "Q")), p17)


def test_pi_eq_psi(demo):
    galois = dn.check_pi_eq_psi(demo, "Qi/Q", 10**4)
    assert galois.galois and galois.mismatches == 0
    cubic = dn.check_pi_eq_psi(demo, "Qc2/Q", 10**4)
    assert not cubic.galois
    assert abs(cubic.density - 0.5) < 0.03
    assert cubic.sample[0] == 5  # 3 is a cube root of 2 mod 5, x^2+3x+9 stays prime
    trivial = dn.check_pi_eq_psi(demo, "Q/Q", 1000)
    assert trivial.mismatches == 0


def test_pi_eq_psi_all_declared_galois(demo):
    for spec in ("Qi/Q", "Qs2/Q", "Qw/Q", "Q8/Q", "Q8/Qi", "S3c/Qw"):
        report = dn.check_pi_eq_psi(demo, spec, 1500)
        assert report.galois and report.mismatches == 0, spec


def test_pullback_square(demo):
    report = dn.check_pullback(demo, "Q", "Qi", "Qs2", "Q8", 1000)
    want = {p for p in stream_primes(1000) if p % 8 == 3}
    assert {row.p for row in report.pi_discrepancies} == want
    assert {row.p for row in report.psi_discrepancies} == want
    for row in report.pi_discrepancies:
        assert row.upstairs and not row.downstairs
    agree = {p for p in stream_primes(1000)} - want - {2}
    assert {5, 7, 17} <= agree
    assert report.points > 200


def test_inclusion_exclusion(demo):
    report = dn.check_inclusion_exclusion(
        expr(demo, "Psi(Qi/Q)"), expr(demo, "Psi(Qs2/Q)"), 10**4
    )
    assert report.exact
    assert report.a.total == report.b.total == report.union.total
    assert abs(report.intersection.value - 0.25) < 0.02
    assert abs(report.union.value - 0.75) < 0.02


def test_inclusion_exclusion_shared_universe(demo):
    # the scan skips the union of both expressions' bad primes, so all four
    # estimates share one denominator even when only one side ramifies at 3
    report = dn.check_inclusion_exclusion(
        expr(demo, "Psi(Qi/Q)"), expr(demo, "Psi(Qw/Q)"), 1000
    )
    assert report.exact
    assert report.a.skipped == (("ramified", 2),)
    assert report.a.total == report.b.total == 166


def test_inclusion_exclusion_degenerate_and_disjoint(demo):
    same = dn.check_inclusion_exclusion(
        expr(demo, "Pi(Qc2/Q)"), expr(demo, "Pi(Qc2/Q)"), 1000
    )
    assert same.exact and same.a == same.b == same.union == same.intersection
    disjoint = dn.check_inclusion_exclusion(
        expr(demo, "{3, 5}"), expr(demo, "{7, 11}"), 1000
    )
    assert disjoint.exact
    assert disjoint.union.hits == 4 and disjoint.intersection.hits == 0


def test_inclusion_exclusion_mixed_bases_rejected(demo):
    with pytest.raises(ExprSyntaxError, match="mixed base"):
        dn.check_inclusion_exclusion(
            expr(demo, "Psi(Qi/Q)"), expr(demo, "Pi(Q8/Qi)"), 1000
        )


def test_pi_intersection_witnesses(demo):
    two = dn.check_pi_intersection(demo, ["Qi", "Qs2"], "Q", 1000)
    assert two.witness == 17
    alone = dn.check_pi_intersection(demo, ["Qi"], "Q", 1000)
    assert alone.witness == 5
    # 17 = 1 mod 8 and 2 = 8^3 mod 17, so 17 already meets the cubic too
    three = dn.check_pi_intersection(demo, ["Qi", "Qs2", "Qc2"], "Q", 1000)
    assert three.witness == 17
    assert pow(8, 3, 17) == 2
    with pytest.raises(ValueError):
        dn.check_pi_intersection(demo, [], "Q", 1000)


def test_pi_intersection_no_witness(demo):
    report = dn.check_pi_intersection(demo, ["Qi", "Qw"], "Q", 100)
    # p = 1 mod 12 first occurs at 13; a tighter bound misses it
    assert report.witness == 13
    tight = dn.check_pi_intersection(demo, ["Qi", "Qw"], "Q", 12)
    assert tight.witness is None
    assert "no witness" in str(tight)
