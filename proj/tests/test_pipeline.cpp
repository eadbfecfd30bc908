#include <doctest.h>

#include "cmq/pipeline.hpp"
#include "support.hpp"

using namespace cmq;
using namespace cmq::test;

namespace {

bool same(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!(a(i, j).re == b(i, j).re && a(i, j).im == b(i, j).im)) return false;
    return true;
}

json reparse(const json& j) { return json::parse(j.dump()); }

PipelineResult run_case15(long digits) {
    PipelineOptions opt;
    opt.digits = digits;
    return run_pipeline(case_tau(15, digits_to_bits(digits) + 128), opt);
}

const PipelineResult& case15_600() {
    static PipelineResult r = run_case15(600);
    return r;
}

}  // namespace

TEST_CASE("JSON round-trips are bit-exact") {
    for (prec_t p : {64UL, 333UL, 2000UL}) {
        CAPTURE(p);
        BigComplex z = random_complex(p, 1e6) * BigComplex(BigFloat::pi(p), BigFloat(p));
        BigComplex back = complex_from_json(reparse(to_json(z)), p);
        CHECK(back.re == z.re);
        CHECK(back.im == z.im);

        RiemannMatrix t = random_reduced_tau(p);
        RiemannMatrix tb = riemann_from_json(reparse(to_json(t)));
        CHECK(tb.prec == t.prec);
        CHECK(same(tb.tau, t.tau));
        CHECK(to_json(tb) == to_json(t));

        ComplexQuartic q;
        for (auto& c : q) c = random_complex(p, 100.0);
        ComplexQuartic qb = complex_quartic_from_json(reparse(to_json(q)));
        for (std::size_t i = 0; i < 15; ++i) CHECK((qb[i].re == q[i].re && qb[i].im == q[i].im));
    }

    RationalQuartic rq = random_quartic(1000);
    rq[4] = mpq_class(-7, 9);
    RationalQuartic rb = rational_quartic_from_json(reparse(to_json(rq)));
    for (std::size_t i = 0; i < 15; ++i) CHECK(rb[i] == rq[i]);

    ZMatrix m = omega3();
    CHECK(equal(zmatrix_from_json(reparse(to_json(m))), m));

    prec_t p = 400;
    PolarizedLattice lat = cm_lattice(load_field(15), find_polarization(load_field(15), 3)[0].xi,
                                      find_polarization(load_field(15), 3)[0].phi, p);
    auto [lb, lp] = lattice_from_json(reparse(to_json(lat, p)));
    CHECK(lp == p);
    CHECK(same(lb.gens, lat.gens));
    CHECK(equal(lb.gram, lat.gram));

    const ThetaVector& th = case15_600().theta;
    ThetaVector tv = theta_from_json(reparse(to_json(th)));
    CHECK(tv.prec == th.prec);
    REQUIRE(tv.values.size() == 64);
    bool all = true;
    for (std::size_t i = 0; i < 64; ++i) all = all && tv.values[i].re == th.values[i].re && tv.values[i].im == th.values[i].im;
    CHECK(all);
    CHECK(same(tv.at_tau.tau, th.at_tau.tau));
}

TEST_CASE("malformed JSON is bad input") {
    CHECK_THROWS_AS(riemann_from_json(json::parse(R"({"prec_bits": 100})")), BadInput);
    CHECK_THROWS_AS(complex_from_json(json::parse(R"({"re": "abc", "im": "0"})"), 64), BadInput);
    CHECK_THROWS_AS(rational_quartic_from_json(json::parse(R"({"coeffs": ["1", "2"]})")), BadInput);
    CHECK_THROWS_AS(rational_quartic_from_json(json::parse(R"([1, 2, 3])")), BadInput);
}

TEST_CASE("case 15 at 600 digits") {
    const PipelineResult& r = case15_600();
    CHECK(r.nonzero_thetas == 36);
    CHECK(r.recognized_all());
    REQUIRE(r.minimal.has_value());
    CHECK((*r.minimal)[0] == 2208);
    CHECK((*r.minimal)[1] == 31736);
    CHECK(r.recognized[1] == mpq_class(3967, 609408));
    for (const BigFloat& d : r.bitangency) CHECK(d < pow2(-long(r.prec) / 2, r.prec));

    json rep = report(r);
    for (const char* key : {"input_tau", "reduced_tau", "reduction_matrix", "theta", "weber_moduli", "quartic",
                            "bitangency_defects", "invariants", "normalized", "recognized", "minimal", "warnings",
                            "seconds"})
        CHECK(rep.contains(key));
    // the quartic in the report parses back
    ComplexQuartic q = complex_quartic_from_json(reparse(rep["quartic"]));
    CHECK((q[7].re == r.quartic[7].re && q[7].im == r.quartic[7].im));
}

TEST_CASE("recognition is stable across precisions") {
    const PipelineResult& a = case15_600();
    PipelineResult b = run_case15(700);
    REQUIRE(a.minimal.has_value());
    REQUIRE(b.minimal.has_value());
    for (std::size_t i = 0; i < 13; ++i) CHECK((*a.minimal)[i] == (*b.minimal)[i]);
}

TEST_CASE("no recognition below the digit threshold") {
    PipelineResult r = run_case15(200);
    CHECK_FALSE(r.minimal.has_value());
    for (Recognition s : r.status) CHECK(s == Recognition::skipped);
    CHECK_FALSE(r.warnings.empty());
    // invariants still agree with the published curve at this precision
    CHECK(weighted_projective_equal(r.invariants, numeric_DO(to_complex(load_case(15).quartic, r.prec)),
                                    pow2(-long(r.prec) / 2, r.prec)));
}

TEST_CASE("errors carry the stage") {
    prec_t p = 300;
    // a diagonal tau is a product of elliptic curves: even thetas vanish
    CMatrix t = cidentity(3, p);
    for (std::size_t i = 0; i < 3; ++i) t(i, i) = BigComplex(BigFloat(p), BigFloat(1L, p));
    PipelineOptions opt;
    opt.digits = 80;
    try {
        run_pipeline(RiemannMatrix(t, p), opt);
        FAIL("decomposable tau went through");
    } catch (const StageError& e) {
        CHECK(e.stage == "weber");
        CHECK(e.error_class() == ErrorClass::unsupported);
    }
    CHECK_THROWS_AS(case_tau(7, p), UnsupportedClassNumber);
}

TEST_CASE("verification of published curves") {
    const PipelineResult& r = case15_600();
    CaseRecord c = load_case(15);
    VerifyReport v = verify_case(c, &r);
    CHECK(v.passed());
    for (const Check& ch : v.checks) CHECK_MESSAGE(ch.status == "pass", ch.name);

    CaseRecord bad = c;
    bad.quartic[3] += 1;
    VerifyReport w = verify_case(bad, &r);
    CHECK_FALSE(w.passed());
    bool mismatch = false;
    for (const Check& ch : w.checks)
        if (ch.name == "pipeline_match") mismatch = ch.status == "fail";
    CHECK(mismatch);

    // exact checks only, for curves without a pipeline run
    for (int id : {19, 10, 2}) {
        VerifyReport e = verify_case(load_case(id), nullptr);
        CHECK(e.passed());
        json j = report(e);
        CHECK(j["case"] == id);
    }
}

TEST_CASE("bundled cases and invariant reports") {
    std::vector<int> ids = bundled_cases();
    CHECK(ids.size() == 19);
    CHECK(std::find(ids.begin(), ids.end(), 4) == ids.end());
    json j = invariants_report(load_case(15).quartic);
    CHECK(j["minimal"]["I3"] == "2208");
    CHECK(theta_bench(case15_600().reduction.tau, {}).empty());
}
