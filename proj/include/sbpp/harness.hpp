#pragma once
// Adversary scripts, experiments and benchmarks over the protocol variants.
// Everything except wall-clock timings is a deterministic function of the seed.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sbpp/report.hpp"
#include "sbpp/variants.hpp"

namespace sbpp::harness {

inline constexpr Timestamp kBaseTime = 1'700'000'000;

/// Seeded world for the attack scripts: a home pair (D1, D2 within ~30 m of
/// each other), a remote drop D3 several km away, and background drops.
struct AttackEnvironment {
    std::uint64_t seed = 0;
    std::vector<geo::Drop> drops;
    Hash32 search_key{};
    geo::Drop home_primary;
    geo::Drop home_secondary;
    geo::Drop remote;
    double search_radius_m = 300.0;
    double unlock_radius_m = 100.0;

    variants::VariantConfig variant_config(
        variants::TokenContent token = variants::TokenContent::Equivalent) const;
};

AttackEnvironment make_attack_environment(std::uint64_t seed, std::size_t background = 200);

/// Point `meters_north`/`meters_east` away from (lat, lon).
geo::Drop offset(std::string id, double lat, double lon, double meters_north, double meters_east);

enum class Attack { A1, A2, A3, A4a, A4b, A5 };

std::string_view attack_name(Attack a);
const std::vector<Attack>& all_attacks();

/// Raised when a trial's setup does not satisfy an attack's preconditions.
class EnvironmentInsufficient : public Error {
public:
    using Error::Error;
};

/// One attack trial against a variant. `trial` picks fresh sessions and times.
/// Returns true when the variant rejected the attack.
bool run_attack(variants::Variant& variant, Attack attack, const AttackEnvironment& env,
                std::size_t trial);

struct AttackResult {
    variants::Kind variant = variants::Kind::V4b;
    Attack attack = Attack::A1;
    std::size_t trials = 0;
    std::size_t blocked = 0;
    std::size_t skipped = 0;
};

std::vector<AttackResult> run_attack_matrix(
    std::size_t trials, std::uint64_t seed,
    variants::TokenContent v8_token = variants::TokenContent::Equivalent);

/// Rows = attacks, columns = variants; cells "✓ n/N" (blocked) or "× n/N".
ExperimentReport attack_matrix_report(const std::vector<AttackResult>& results, std::uint64_t seed);

// ---- audit replay and fault localization ---------------------------------

enum class Fault {
    SessionRebinding,    ///< receipt (or token) from another session
    ResultSetTampering,  ///< path from an altered result set
    ForgedAuthorization, ///< receipt (or token) signed with a non-server key
};

std::string_view fault_name(Fault f);

struct FaultRow {
    Fault fault = Fault::SessionRebinding;
    variants::Kind variant = variants::Kind::V4b;
    std::size_t injections = 0;
    std::size_t rejected = 0;
    std::map<std::string, std::size_t> reasons;
};

struct AuditReplayResult {
    std::size_t sessions = 0;
    std::size_t full_pass = 0;
    std::size_t core_pass = 0;
    std::map<std::string, std::size_t> core_reasons;
    std::vector<FaultRow> faults;
};

AuditReplayResult run_audit_replay(std::uint64_t seed, std::size_t sessions = 100);
ExperimentReport audit_replay_report(const AuditReplayResult& r, std::uint64_t seed);

// ---- cross-session re-association ----------------------------------------

struct ReassocConfig {
    std::size_t sessions = 1000;
    std::size_t drops = 20;       ///< uniform popularity over this many drops
    std::size_t epoch_every = 26; ///< epoch label changes every K sessions
    std::uint64_t seed = 1;
};

struct ReassocResult {
    variants::Kind variant = variants::Kind::V2;
    std::size_t sessions = 0;
    std::size_t successes = 0;
    double rate = 0;
    double analytic = 0;
};

/// Probability that a session shares (D, pv, e) with at least one other
/// session, averaged over sessions (the last epoch may be partial).
double analytic_reassociation_rate(std::size_t drops, std::size_t epoch_every, std::size_t sessions);

std::vector<ReassocResult> run_reassociation(const ReassocConfig& config,
                                             const std::vector<variants::Kind>& kinds);
ExperimentReport reassociation_report(const std::vector<ReassocResult>& results,
                                      const ReassocConfig& config);

// ---- atomicity and isolation ----------------------------------------------

struct AtomicityRow {
    std::string scenario;
    std::size_t trials = 0;
    std::size_t violations = 0;
    std::string detail;
};

std::vector<AtomicityRow> run_atomicity(std::uint64_t seed);
ExperimentReport atomicity_report(const std::vector<AtomicityRow>& rows, std::uint64_t seed);

// ---- malicious server ------------------------------------------------------

struct MaliciousRow {
    std::string behavior;
    std::size_t trials = 0;
    std::size_t attack_succeeded = 0;  ///< the dishonest behavior achieved its goal
    std::size_t detected = 0;          ///< caught by audit or reference comparison
    std::string note;
};

std::vector<MaliciousRow> run_malicious_server(std::uint64_t seed, std::size_t trials = 100);
ExperimentReport malicious_server_report(const std::vector<MaliciousRow>& rows, std::uint64_t seed);

// ---- search quality --------------------------------------------------------

struct SearchQuality {
    std::size_t drops = 0;
    std::size_t queries = 0;
    double radius_m = 0;
    int precision = 0;
    std::size_t relevant = 0;  ///< in-radius (query, drop) pairs
    std::size_t returned = 0;
    std::size_t hits = 0;
    double recall = 0;
    double precision_score = 0;
    double mean_jaccard_v2_v4b = 0;  ///< query-leakage similarity between GridSE and SBPP
    double seconds = 0;
};

SearchQuality run_search_quality(std::uint64_t seed, std::size_t drops = 1000,
                                 std::size_t queries = 200, double radius_m = 1000.0);
ExperimentReport search_quality_report(const SearchQuality& q, std::uint64_t seed);

// ---- benchmarks --------------------------------------------------------------

struct MerkleBenchRow {
    std::size_t n = 0;
    double build_ms = 0;
    double prove_us = 0;
    double verify_us = 0;
    std::size_t steps = 0;
    std::size_t compact_state_bytes = 0;
    std::size_t stateful_state_bytes = 0;
};

std::vector<MerkleBenchRow> run_merkle_bench(
    const std::vector<std::size_t>& sizes = {100, 1000, 5000, 10000, 20000, 50000},
    std::uint64_t seed = 1);
ExperimentReport merkle_bench_report(const std::vector<MerkleBenchRow>& rows);

struct LatencyStats {
    std::string path;
    double median_us = 0;
    double mean_us = 0;
    double p95_us = 0;
    double p99_us = 0;
};

struct LatencyBench {
    std::size_t drops = 0;
    std::size_t iterations = 0;
    std::vector<LatencyStats> paths;  ///< plaintext, gridse, sbpp
    /// Median per SBPP component: session, tokens, match, digest, validate.
    std::vector<std::pair<std::string, double>> sbpp_components_us;

    const LatencyStats& path(std::string_view name) const;
};

LatencyStats summarize(std::string path, std::vector<double> samples_us);

LatencyBench run_latency_bench(std::uint64_t seed, std::size_t drops = 1000,
                               std::size_t iterations = 1000, std::size_t warmup = 100);
ExperimentReport latency_report(const LatencyBench& b);

}  // namespace sbpp::harness
