#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cmq/data.hpp"
#include "cmq/pipeline.hpp"

using namespace cmq;

namespace {

constexpr int kOk = 0, kFailure = 1, kVerification = 2, kPrecision = 3, kUnsupported = 4;

int exit_code(ErrorClass c) {
    switch (c) {
        case ErrorClass::verification: return kVerification;
        case ErrorClass::precision: return kPrecision;
        case ErrorClass::unsupported:
        case ErrorClass::input: return kUnsupported;
    }
    return kFailure;
}

struct Source {
    std::optional<int> case_id;
    std::string tau_file, lattice_file;

    void add_to(CLI::App* app) {
        auto* c = app->add_option("--case", case_id, "bundled case number");
        auto* t = app->add_option("--tau", tau_file, "Riemann matrix JSON file")->check(CLI::ExistingFile);
        auto* l = app->add_option("--lattice", lattice_file, "polarized lattice JSON file")->check(CLI::ExistingFile);
        t->excludes(l);
        c->excludes(t);
    }

    // --lattice wins over --case so h* = 4 cases can be run from a supplied lattice
    RiemannMatrix tau(prec_t prec) const {
        if (!lattice_file.empty()) {
            auto [lat, p] = lattice_from_json(load_json(lattice_file));
            return period_matrix(lat, std::max(p, prec));
        }
        if (!tau_file.empty()) return riemann_from_json(load_json(tau_file));
        if (case_id) return case_tau(*case_id, prec);
        throw BadInput("one of --case, --tau or --lattice is required");
    }
};

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(1) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw BadInput("cannot write " + out);
    f << j.dump(1) << "\n";
}

const std::map<std::string, ThetaAlgorithm> kAlgorithms{{"naive", ThetaAlgorithm::naive}, {"fast", ThetaAlgorithm::fast}};
const std::map<std::string, ReductionVariant> kVariants{{"minkowski", ReductionVariant::minkowski},
                                                        {"lll", ReductionVariant::lll}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CM plane quartics from Riemann matrices: theta constants, Weber reconstruction, invariants"};
    app.require_subcommand(1);

    long digits = 1000;
    ThetaAlgorithm algorithm = ThetaAlgorithm::fast;
    ReductionVariant variant = ReductionVariant::minkowski;
    std::string out;
    auto common = [&](CLI::App* s, bool with_algorithm) {
        s->add_option("--prec", digits, "working precision in decimal digits")->capture_default_str()->check(CLI::PositiveNumber);
        s->add_option("--variant", variant, "reduction of the imaginary part")
            ->transform(CLI::CheckedTransformer(kVariants, CLI::ignore_case));
        if (with_algorithm)
            s->add_option("--algorithm", algorithm, "theta evaluator")
                ->transform(CLI::CheckedTransformer(kAlgorithms, CLI::ignore_case));
        s->add_option("--out", out, "write JSON here instead of stdout");
    };

    Source src;
    auto* pipeline = app.add_subcommand("pipeline", "tau -> thetas -> quartic -> invariants -> rational recognition");
    src.add_to(pipeline);
    common(pipeline, true);

    std::string curve_file;
    int verify_case_id = 0;
    std::string verify_lattice;
    bool exact_only = false;
    auto* verify = app.add_subcommand("verify", "check a published curve against the pipeline");
    verify->add_option("--case", verify_case_id, "bundled case number")->required();
    verify->add_option("--curve", curve_file, "quartic JSON replacing the bundled one")->check(CLI::ExistingFile);
    verify->add_option("--lattice", verify_lattice, "polarized lattice JSON file")->check(CLI::ExistingFile);
    verify->add_flag("--exact-only", exact_only, "skip the analytic pipeline");
    common(verify, true);

    int classify_case = 0;
    std::string prime;
    auto* classify = app.add_subcommand("classify", "reduction type of the CM Jacobian at a prime");
    classify->add_option("--case", classify_case, "bundled case number")->required();
    classify->add_option("--prime,-p", prime, "the prime")->required();

    std::vector<long> bench_digits{500, 1000, 2000};
    auto* bench = app.add_subcommand("theta-bench", "naive against fast theta constants");
    Source bench_src;
    bench_src.add_to(bench);
    bench->add_option("--digits", bench_digits, "precisions in decimal digits")->delimiter(',')->capture_default_str();
    bench->add_option("--out", out, "write JSON here instead of stdout");

    auto* reduce = app.add_subcommand("reduce", "reduce a Riemann matrix to the fundamental domain");
    Source reduce_src;
    reduce_src.add_to(reduce);
    common(reduce, false);

    std::string quartic_file;
    std::optional<int> inv_case;
    auto* invariants = app.add_subcommand("invariants", "exact invariants of a rational quartic");
    auto* qf = invariants->add_option("--quartic", quartic_file, "quartic JSON file")->check(CLI::ExistingFile);
    invariants->add_option("--case", inv_case, "bundled case number")->excludes(qf);
    invariants->add_option("--out", out, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        prec_t p = digits_to_bits(digits);
        if (*pipeline) {
            PipelineOptions opt;
            opt.digits = digits;
            opt.algorithm = algorithm;
            opt.variant = variant;
            PipelineResult r = run_pipeline(src.tau(p + 128), opt);
            for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
            emit(report(r), out);
            bool wanted = digits >= opt.min_recognition_digits;
            return wanted && !r.recognized_all() ? kPrecision : kOk;
        }
        if (*verify) {
            CaseRecord c = load_case(verify_case_id);
            if (!curve_file.empty()) c.quartic = rational_quartic_from_json(load_json(curve_file));
            std::optional<PipelineResult> r;
            if (!exact_only && (c.h_star == 1 || !verify_lattice.empty())) {
                Source s;
                s.case_id = verify_case_id;
                s.lattice_file = verify_lattice;
                PipelineOptions opt;
                opt.digits = digits;
                opt.algorithm = algorithm;
                opt.variant = variant;
                r = run_pipeline(s.tau(p + 128), opt);
                for (const auto& w : r->warnings) std::cerr << "warning: " << w << "\n";
            }
            VerifyReport v = verify_case(c, r ? &*r : nullptr);
            for (const auto& ch : v.checks) std::cerr << ch.status << "  " << ch.name << "  " << ch.detail << "\n";
            emit(report(v), out);
            return v.passed() ? kOk : kVerification;
        }
        if (*classify) {
            mpz_class pp;
            if (pp.set_str(prime, 10) != 0) throw BadInput("bad prime '" + prime + "'");
            ReductionType t = classify_reduction(load_field(classify_case), pp);
            std::cout << "case " << classify_case << ", p = " << prime << ": " << t.n << " prime"
                      << (t.n == 1 ? "" : "s") << " above p, d = " << t.d << ", "
                      << (t.simple ? "absolutely simple" : "not absolutely simple") << ", "
                      << (t.supersingular ? "supersingular" : "not supersingular") << ", End^0 = " << t.algebra << "\n";
            return kOk;
        }
        if (*bench) {
            long top = bench_digits.empty() ? 10 : *std::max_element(bench_digits.begin(), bench_digits.end());
            RiemannMatrix t = bench_src.tau(digits_to_bits(top) + 128);
            RiemannMatrix red = siegel_reduce(t, ReductionVariant::minkowski).tau;
            json rows = json::array();
            bool ok = true;
            std::printf("%8s %12s %12s %14s\n", "digits", "naive [s]", "fast [s]", "log2 |diff|");
            for (const auto& row : theta_bench(red, bench_digits)) {
                std::printf("%8ld %12.3f %12.3f %14ld%s\n", row.digits, row.naive_seconds, row.fast_seconds,
                            row.disagreement_log2, row.agree ? "" : "  DISAGREE");
                rows.push_back({{"digits", row.digits},
                                {"naive_seconds", row.naive_seconds},
                                {"fast_seconds", row.fast_seconds},
                                {"disagreement_log2", row.disagreement_log2},
                                {"agree", row.agree}});
                ok = ok && row.agree;
            }
            if (!out.empty()) emit(json{{"rows", rows}}, out);
            return ok ? kOk : kVerification;
        }
        if (*reduce) {
            SiegelReduction r = siegel_reduce(reduce_src.tau(p), variant);
            emit(json{{"reduced", to_json(r.tau)}, {"matrix", to_json(r.m)}}, out);
            return kOk;
        }
        if (*invariants) {
            RationalQuartic q;
            if (inv_case)
                q = load_case(*inv_case).quartic;
            else if (!quartic_file.empty())
                q = rational_quartic_from_json(load_json(quartic_file));
            else
                throw BadInput("one of --quartic or --case is required");
            emit(invariants_report(q), out);
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.error_class());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
