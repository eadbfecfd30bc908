#include "cmq/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "cmq/data.hpp"

namespace cmq {

const char* const kMonomialOrder = "x4,x3y,x3z,x2y2,x2yz,x2z2,xy3,xy2z,xyz2,xz3,y4,y3z,y2z2,yz3,z4";

// ---- JSON ----

json to_json(const BigFloat& x) { return x.to_string(); }

json to_json(const BigComplex& z) { return json{{"re", z.re.to_string()}, {"im", z.im.to_string()}}; }

json to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json to_json(const ZMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
        rows.push_back(row);
    }
    return rows;
}

json to_json(const RiemannMatrix& t) { return json{{"prec_bits", t.prec}, {"tau", to_json(t.tau)}}; }

json to_json(const PolarizedLattice& lat, prec_t prec) {
    return json{{"prec_bits", prec}, {"gens", to_json(lat.gens)}, {"gram", to_json(lat.gram)}};
}

json to_json(const ThetaVector& th) {
    json v = json::array();
    for (const auto& z : th.values) v.push_back(to_json(z));
    return json{{"prec_bits", th.prec}, {"tau", to_json(th.at_tau)}, {"theta", v}};
}

json to_json(const ComplexQuartic& q) {
    json v = json::array();
    for (const auto& z : q) v.push_back(to_json(z));
    return json{{"prec_bits", q[0].prec()}, {"coeffs", v}, {"order", kMonomialOrder}};
}

json to_json(const RationalQuartic& q) {
    json v = json::array();
    for (const auto& c : q) v.push_back(c.get_str());
    return json{{"coeffs", v}, {"order", kMonomialOrder}};
}

namespace {

// Wraps json type errors into BadInput.
template <class F>
auto parsing(const char* what, F f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw BadInput(std::string("malformed ") + what + ": " + e.what());
    }
}

prec_t prec_of(const json& j) {
    long p = j.at("prec_bits").get<long>();
    if (p < 2) throw BadInput("prec_bits must be at least 2");
    return prec_t(p);
}

}  // namespace

BigComplex complex_from_json(const json& j, prec_t prec) {
    return parsing("complex number", [&] {
        if (j.is_string()) return BigComplex(BigFloat::parse(j.get<std::string>(), prec), BigFloat(prec));
        return BigComplex(BigFloat::parse(j.at("re").get<std::string>(), prec),
                          BigFloat::parse(j.at("im").get<std::string>(), prec));
    });
}

CMatrix cmatrix_from_json(const json& j, prec_t prec) {
    return parsing("complex matrix", [&] {
        std::size_t r = j.size(), c = r ? j.at(0).size() : 0;
        CMatrix m(r, c);
        for (std::size_t a = 0; a < r; ++a) {
            if (j.at(a).size() != c) throw BadInput("ragged matrix");
            for (std::size_t b = 0; b < c; ++b) m(a, b) = complex_from_json(j.at(a).at(b), prec);
        }
        return m;
    });
}

ZMatrix zmatrix_from_json(const json& j) {
    return parsing("integer matrix", [&] {
        std::size_t r = j.size(), c = r ? j.at(0).size() : 0;
        ZMatrix m(r, c);
        for (std::size_t a = 0; a < r; ++a) {
            if (j.at(a).size() != c) throw BadInput("ragged matrix");
            for (std::size_t b = 0; b < c; ++b) {
                const json& e = j.at(a).at(b);
                std::string s = e.is_string() ? e.get<std::string>() : e.dump();
                if (m(a, b).set_str(s, 10) != 0) throw BadInput("bad integer '" + s + "'");
            }
        }
        return m;
    });
}

RiemannMatrix riemann_from_json(const json& j) {
    prec_t p = parsing("Riemann matrix", [&] { return prec_of(j); });
    CMatrix t = cmatrix_from_json(parsing("Riemann matrix", [&] { return j.at("tau"); }), p);
    if (t.rows() != 3 || t.cols() != 3) throw BadInput("tau must be 3x3");
    RiemannMatrix r(t, p);
    check_riemann_matrix(r);
    return r;
}

std::pair<PolarizedLattice, prec_t> lattice_from_json(const json& j) {
    prec_t p = parsing("lattice", [&] { return prec_of(j); });
    PolarizedLattice lat;
    lat.gens = cmatrix_from_json(parsing("lattice", [&] { return j.at("gens"); }), p);
    lat.gram = zmatrix_from_json(parsing("lattice", [&] { return j.at("gram"); }));
    if (lat.gens.rows() != 3 || lat.gens.cols() != 6) throw BadInput("gens must be 3x6");
    if (lat.gram.rows() != 6 || lat.gram.cols() != 6) throw BadInput("gram must be 6x6");
    return {lat, p};
}

ThetaVector theta_from_json(const json& j) {
    ThetaVector th;
    th.prec = parsing("theta vector", [&] { return prec_of(j); });
    const json& v = parsing("theta vector", [&] { return std::cref(j.at("theta")); });
    if (v.size() != 64) throw BadInput("expected 64 theta values");
    for (const auto& z : v) th.values.push_back(complex_from_json(z, th.prec));
    if (j.contains("tau")) th.at_tau = riemann_from_json(j.at("tau"));
    return th;
}

ComplexQuartic complex_quartic_from_json(const json& j) {
    const json& v = parsing("quartic", [&] { return std::cref(j.at("coeffs")); });
    if (v.size() != 15) throw BadInput("expected 15 coefficients");
    // precision: explicit, else enough for the longest string
    prec_t p = 64;
    if (j.contains("prec_bits")) {
        p = prec_of(j);
    } else {
        for (const auto& z : v) {
            std::size_t len = z.is_string() ? z.get<std::string>().size()
                                            : std::max(z.at("re").get<std::string>().size(), z.at("im").get<std::string>().size());
            p = std::max(p, digits_to_bits(long(len)) + 8);
        }
    }
    ComplexQuartic q;
    for (std::size_t n = 0; n < 15; ++n) q[n] = complex_from_json(v[n], p);
    return q;
}

RationalQuartic rational_quartic_from_json(const json& j) {
    return parsing("quartic", [&] {
        const json& v = j.is_array() ? j : j.at("coeffs");
        if (v.size() != 15) throw BadInput("expected 15 coefficients");
        if (j.is_object() && j.contains("order") && j.at("order").get<std::string>() != kMonomialOrder)
            throw BadInput("unsupported monomial order '" + j.at("order").get<std::string>() + "'");
        std::vector<std::string> s;
        for (const auto& c : v) s.push_back(c.is_string() ? c.get<std::string>() : c.dump());
        return parse_quartic(s);
    });
}

// ---- cases ----

CaseRecord load_case(int case_id) {
    CaseRecord c;
    bool found = false;
    for (const auto& r : bundled("curves.json").at("curves")) {
        if (r.at("case").get<int>() != case_id) continue;
        found = true;
        c.case_id = case_id;
        c.quartic = rational_quartic_from_json(r.at("coeffs"));
        c.i27_sign = r.at("i27_min_sign").get<int>();
        for (const auto& f : r.at("i27_min_factors"))
            c.i27_factors.emplace_back(mpz_class(f.at(0).get<long>()), f.at(1).get<int>());
    }
    if (!found) throw BadInput("no bundled curve for case " + std::to_string(case_id));
    for (const auto& r : bundled("fields.json").at("fields"))
        if (r.at("case").get<int>() == case_id) c.h_star = r.at("h_star").get<int>();
    return c;
}

std::vector<int> bundled_cases() {
    std::vector<int> out;
    for (const auto& r : bundled("curves.json").at("curves")) out.push_back(r.at("case").get<int>());
    return out;
}

RiemannMatrix case_tau(int case_id, prec_t prec) { return cm_period_matrix(load_field(case_id), prec); }

// ---- pipeline ----

const char* to_string(Recognition r) {
    switch (r) {
        case Recognition::ok: return "ok";
        case Recognition::unstable: return "unstable";
        case Recognition::refused: return "refused";
        case Recognition::skipped: return "skipped";
    }
    return "?";
}

bool PipelineResult::recognized_all() const {
    return std::all_of(status.begin(), status.end(), [](Recognition r) { return r == Recognition::ok; });
}

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
auto stage(PipelineResult& r, const char* name, F f) {
    auto t0 = Clock::now();
    try {
        auto v = f();
        r.seconds.emplace_back(name, std::chrono::duration<double>(Clock::now() - t0).count());
        return v;
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e);
    }
}

BigFloat decimal_power(long e, prec_t p) { return BigFloat::parse("1e" + std::to_string(e), p); }

}  // namespace

PipelineResult run_pipeline(const RiemannMatrix& tau, const PipelineOptions& opt) {
    if (opt.digits < 10) throw BadInput("precision below 10 digits");
    PipelineResult r;
    prec_t p = digits_to_bits(opt.digits);
    r.prec = p;
    r.input = tau;
    if (tau.prec < p)
        r.warnings.push_back("input tau carries " + std::to_string(tau.prec) + " bits, fewer than the " +
                             std::to_string(p) + " requested");
    prec_t work = p + 128;
    RiemannMatrix padded(with_prec(tau.tau, work), work);

    r.reduction = stage(r, "reduce", [&] { return siegel_reduce(padded, opt.variant); });
    r.theta = stage(r, "theta", [&] {
        return opt.algorithm == ThetaAlgorithm::fast ? theta_fast(r.reduction.tau, p + 64)
                                                     : theta_naive(r.reduction.tau, p + 64);
    });
    BigFloat zero_tol = pow2(-long(p) / 2, p);
    for (const auto& z : r.theta.values)
        if (!(abs(z) < zero_tol)) ++r.nonzero_thetas;

    r.weber = stage(r, "weber", [&] { return weber_moduli(r.theta); });
    r.quartic = stage(r, "reconstruct", [&] { return reconstruct_quartic(r.weber); });
    r.bitangency = stage(r, "bitangency", [&] {
        std::vector<BigFloat> d;
        for (const auto& l : aronhold_lines(r.weber)) d.push_back(bitangency_defect(r.quartic, l));
        return d;
    });
    for (std::size_t i = 0; i < r.bitangency.size(); ++i)
        if (!(r.bitangency[i] < zero_tol))
            r.warnings.push_back("Aronhold line " + std::to_string(i + 1) + " has bitangency defect " +
                                 r.bitangency[i].to_string(6));

    r.invariants = stage(r, "invariants", [&] { return numeric_DO(r.quartic); });
    r.normalized = stage(r, "normalize", [&] { return do_normalize(r.invariants); });

    if (opt.digits < opt.min_recognition_digits) {
        r.status.fill(Recognition::skipped);
        r.warnings.push_back("no rational recognition below " + std::to_string(opt.min_recognition_digits) +
                             " digits");
        return r;
    }
    stage(r, "recognize", [&] {
        BigFloat im_tol = decimal_power(-opt.digits / 2 + 20, p);
        for (std::size_t k = 0; k < 13; ++k) {
            if (!(abs(r.normalized[k].im) < im_tol)) {
                r.status[k] = Recognition::refused;
                r.warnings.push_back(std::string(kDONames[k]) + " has imaginary part " +
                                     r.normalized[k].im.to_string(6));
                continue;
            }
            try {
                r.recognized[k] = rational_recognize(r.normalized[k].re, opt.max_den_digits);
                r.status[k] = Recognition::ok;
            } catch (const Unstable&) {
                r.status[k] = Recognition::unstable;
            }
        }
        return 0;
    });
    if (r.recognized_all()) {
        RationalDO t;
        std::copy(r.recognized.begin(), r.recognized.end(), t.begin());
        r.minimal = stage(r, "minimize", [&] { return minimal_representative(t); });
    } else {
        r.warnings.push_back("some invariants were not recognized; no minimal representative");
    }
    return r;
}

namespace {

json named(const ComplexDO& t) {
    json o = json::object();
    for (std::size_t k = 0; k < 13; ++k) o[kDONames[k]] = to_json(t[k]);
    return o;
}

json named(const RationalDO& t) {
    json o = json::object();
    for (std::size_t k = 0; k < 13; ++k) o[kDONames[k]] = t[k].get_str();
    return o;
}

json named(const MinimalDO& t) {
    json o = json::object();
    for (std::size_t k = 0; k < 13; ++k) o[kDONames[k]] = t[k].get_str();
    return o;
}

json factor_list(const std::vector<std::pair<mpz_class, int>>& f) {
    json a = json::array();
    for (const auto& [p, e] : f) a.push_back(json::array({p.get_str(), e}));
    return a;
}

json to_json(const DiscriminantReport& d) {
    return json{{"i27_min", d.i27_min.get_str()},
                {"sign", d.sign},
                {"small_primes", factor_list(d.small)},
                {"other_primes", factor_list(d.primes)},
                {"unfactored", factor_list(d.composite)}};
}

json calibration_json() {
    const DOCalibration& c = do_calibration();
    return json{{"factors", named(c.factor)}, {"source", c.source}};
}

}  // namespace

json report(const PipelineResult& r) {
    json out;
    out["prec_bits"] = r.prec;
    out["prec_digits"] = bits_to_digits(r.prec);
    out["input_tau"] = to_json(r.input);
    out["reduced_tau"] = to_json(r.reduction.tau);
    out["reduction_matrix"] = to_json(r.reduction.m);
    out["theta"] = to_json(r.theta);
    out["nonzero_thetas"] = r.nonzero_thetas;
    out["weber_moduli"] = to_json(r.weber.a);
    out["quartic"] = to_json(r.quartic);
    json bt = json::array();
    for (const auto& d : r.bitangency) bt.push_back(d.to_string(6));
    out["bitangency_defects"] = bt;
    out["invariants"] = named(r.invariants);
    out["normalized"] = named(r.normalized);
    json rec = json::object();
    for (std::size_t k = 0; k < 13; ++k) {
        json e{{"status", to_string(r.status[k])}};
        e["value"] = r.status[k] == Recognition::ok ? json(r.recognized[k].get_str()) : json(nullptr);
        rec[kDONames[k]] = e;
    }
    out["recognized"] = rec;
    if (r.minimal) {
        out["minimal"] = named(*r.minimal);
        out["i27_min"] = to_json(discriminant_factors((*r.minimal)[12]));
    } else {
        out["minimal"] = nullptr;
    }
    out["calibration"] = calibration_json();
    out["warnings"] = r.warnings;
    json t = json::object();
    for (const auto& [name, s] : r.seconds) t[name] = s;
    out["seconds"] = t;
    return out;
}

json invariants_report(const RationalQuartic& q) {
    RationalDO raw = raw_exact_DO(q), cal = exact_DO(q);
    json out;
    out["quartic"] = to_json(q);
    out["raw"] = named(raw);
    out["calibrated"] = named(cal);
    if (sgn(cal[0]) != 0) out["normalized"] = named(do_normalize(cal));
    if (sgn(cal[12]) != 0) {
        MinimalDO m = minimal_representative(cal);
        out["minimal"] = named(m);
        out["i27_min"] = to_json(discriminant_factors(m[12]));
    } else {
        out["warning"] = "I27 vanishes: the quartic is singular";
    }
    out["calibration"] = calibration_json();
    return out;
}

// ---- verification ----

bool VerifyReport::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == "fail"; });
}

namespace {

std::vector<std::pair<mpz_class, int>> beyond_seven(const std::vector<std::pair<mpz_class, int>>& f) {
    std::vector<std::pair<mpz_class, int>> out;
    for (const auto& pe : f)
        if (pe.first > 7) out.push_back(pe);
    std::sort(out.begin(), out.end());
    return out;
}

std::string show(const std::vector<std::pair<mpz_class, int>>& f) {
    if (f.empty()) return "1";
    std::string s;
    for (const auto& [p, e] : f) {
        if (!s.empty()) s += "*";
        s += p.get_str() + "^" + std::to_string(e);
    }
    return s;
}

}  // namespace

VerifyReport verify_case(const CaseRecord& c, const PipelineResult* pipeline) {
    VerifyReport v;
    v.case_id = c.case_id;
    RationalDO exact = exact_DO(c.quartic);
    if (sgn(exact[12]) == 0) {
        v.checks.push_back({"smooth", "fail", "I27 of the published quartic vanishes"});
        return v;
    }
    v.checks.push_back({"smooth", "pass", "I27 != 0"});

    DiscriminantReport d = discriminant_factors(minimal_representative(exact)[12]);
    v.checks.push_back({"i27_min_sign", d.sign == c.i27_sign ? "pass" : "fail",
                        "computed " + std::to_string(d.sign) + ", table " + std::to_string(c.i27_sign)});
    auto mine = beyond_seven(d.primes), table = beyond_seven(c.i27_factors);
    std::string detail = "computed " + show(mine) + ", table " + show(table);
    if (!d.composite.empty()) detail += ", unfactored " + show(d.composite);
    v.checks.push_back({"i27_min_prime_to_210", mine == table && d.composite.empty() ? "pass" : "fail", detail});

    if (!pipeline) {
        v.checks.push_back({"pipeline_match", "skipped", "no period matrix for this case"});
        return v;
    }
    if (pipeline->recognized_all()) {
        RationalDO t;
        std::copy(pipeline->recognized.begin(), pipeline->recognized.end(), t.begin());
        bool eq = weighted_projective_equal(exact, t);
        v.checks.push_back({"pipeline_match", eq ? "pass" : "fail",
                            eq ? "recognized invariants equal the exact ones" : "recognized invariants differ"});
    } else {
        prec_t p = pipeline->prec;
        ComplexDO ex;
        for (std::size_t k = 0; k < 13; ++k) ex[k] = BigComplex(exact[k], p);
        bool eq = weighted_projective_equal(pipeline->invariants, ex, pow2(-long(p) / 2, p));
        v.checks.push_back({"pipeline_match", eq ? "pass" : "fail",
                            std::string("numeric comparison to 2^(-P/2), recognition incomplete; ") +
                                (eq ? "equal" : "differ")});
    }
    return v;
}

json report(const VerifyReport& v) {
    json checks = json::array();
    for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    return json{{"case", v.case_id}, {"passed", v.passed()}, {"checks", checks}};
}

// ---- theta timing ----

std::vector<BenchRow> theta_bench(const RiemannMatrix& reduced, const std::vector<long>& digits) {
    std::vector<BenchRow> rows;
    for (long dg : digits) {
        BenchRow row;
        row.digits = dg;
        prec_t p = digits_to_bits(dg);
        RiemannMatrix t(with_prec(reduced.tau, p + 64), p + 64);
        auto t0 = Clock::now();
        ThetaVector a = theta_naive(t, p);
        auto t1 = Clock::now();
        ThetaVector b = theta_fast(t, p);
        auto t2 = Clock::now();
        row.naive_seconds = std::chrono::duration<double>(t1 - t0).count();
        row.fast_seconds = std::chrono::duration<double>(t2 - t1).count();
        BigFloat worst(p);
        for (int i = 0; i < 64; ++i) worst = std::max(worst, abs(a[i] - b[i]), [](const BigFloat& x, const BigFloat& y) { return x < y; });
        row.disagreement_log2 = worst.is_zero() ? -long(p) - 64 : worst.exponent();
        row.agree = worst < pow2(30 - long(p), p);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cmq
