#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmq/cmfield.hpp"
#include "cmq/dixmier_ohno.hpp"
#include "cmq/siegel.hpp"
#include "cmq/theta.hpp"
#include "cmq/weber.hpp"

namespace cmq {

using nlohmann::json;

// --- JSON forms of the artifacts.  Reals are decimal strings carrying enough
// digits to parse back to the same binary value at "prec_bits".

json to_json(const BigFloat& x);
json to_json(const BigComplex& z);
json to_json(const CMatrix& m);
json to_json(const ZMatrix& m);
json to_json(const RiemannMatrix& t);
json to_json(const PolarizedLattice& lat, prec_t prec);
json to_json(const ThetaVector& th);
json to_json(const ComplexQuartic& q);
json to_json(const RationalQuartic& q);

BigComplex complex_from_json(const json& j, prec_t prec);
CMatrix cmatrix_from_json(const json& j, prec_t prec);
ZMatrix zmatrix_from_json(const json& j);
RiemannMatrix riemann_from_json(const json& j);
std::pair<PolarizedLattice, prec_t> lattice_from_json(const json& j);
ThetaVector theta_from_json(const json& j);
ComplexQuartic complex_quartic_from_json(const json& j);
RationalQuartic rational_quartic_from_json(const json& j);

extern const char* const kMonomialOrder;

// --- bundled cases

struct CaseRecord {
    int case_id = 0;
    RationalQuartic quartic;
    int i27_sign = 1;
    std::vector<std::pair<mpz_class, int>> i27_factors;
    int h_star = 0;  // 0 when the field is not bundled
};

CaseRecord load_case(int case_id);
std::vector<int> bundled_cases();

// tau of the principal polarization for an h* = 1 case
RiemannMatrix case_tau(int case_id, prec_t prec);

// --- pipeline

enum class ThetaAlgorithm { naive, fast };

struct PipelineOptions {
    long digits = 1000;
    ThetaAlgorithm algorithm = ThetaAlgorithm::fast;
    ReductionVariant variant = ReductionVariant::minkowski;
    long max_den_digits = 100;
    long min_recognition_digits = 300;
};

enum class Recognition { ok, unstable, refused, skipped };
const char* to_string(Recognition r);

struct PipelineResult {
    prec_t prec = 0;
    RiemannMatrix input;
    SiegelReduction reduction;
    ThetaVector theta;
    int nonzero_thetas = 0;
    WeberModuli weber;
    ComplexQuartic quartic;
    std::vector<BigFloat> bitangency;
    ComplexDO invariants;  // calibrated, before normalization
    ComplexDO normalized;
    std::array<mpq_class, 13> recognized;
    std::array<Recognition, 13> status{};
    std::optional<MinimalDO> minimal;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> seconds;

    bool recognized_all() const;
};

// Errors from a stage come back as StageError carrying the stage name and the
// class of the original error.
struct StageError : Error {
    StageError(const std::string& stage, const Error& e)
        : Error(e.kind(), e.error_class(), stage + ": " + e.what()), stage(stage) {}
    std::string stage;
};

PipelineResult run_pipeline(const RiemannMatrix& tau, const PipelineOptions& opt);
json report(const PipelineResult& r);

// Raw, normalized and minimal invariants of an exact quartic, the factored
// I27^min, and the calibration constants.
json invariants_report(const RationalQuartic& q);

// --- verification of a published curve against a pipeline run

struct Check {
    std::string name;
    std::string status;  // "pass", "fail" or "skipped"
    std::string detail;
};

struct VerifyReport {
    int case_id = 0;
    std::vector<Check> checks;
    bool passed() const;
};

// pipeline may be null when no period matrix is available for the case
VerifyReport verify_case(const CaseRecord& c, const PipelineResult* pipeline);
json report(const VerifyReport& v);

// --- theta timing

struct BenchRow {
    long digits = 0;
    double naive_seconds = 0, fast_seconds = 0;
    long disagreement_log2 = 0;  // max over the 64 entries of log2 |naive - fast|
    bool agree = false;          // disagreement below 2^(-P+30)
};

std::vector<BenchRow> theta_bench(const RiemannMatrix& reduced, const std::vector<long>& digits);

}  // namespace cmq
