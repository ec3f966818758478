// posme command-line interface. Links the C API only.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "posme.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int status_exit(posme_status s)
{
    switch (s) {
        case POSME_OK: return kExitOk;
        case POSME_ERR_INVALID_ARGUMENT:
        case POSME_ERR_PARSE:
        case POSME_ERR_IO: return kExitUsage;
        default: return kExitInternal;
    }
}

void check(posme_status s)
{
    if (s != POSME_OK) {
        std::cerr << "error: " << posme_last_error() << "\n";
        std::exit(status_exit(s));
    }
}

std::string hex(const uint8_t* bytes, size_t n)
{
    static const char* k = "0123456789abcdef";
    std::string s;
    s.reserve(2 * n);
    for (size_t i = 0; i < n; ++i) {
        s.push_back(k[bytes[i] >> 4]);
        s.push_back(k[bytes[i] & 0xf]);
    }
    return s;
}

std::vector<uint8_t> from_hex(const std::string& s)
{
    if (s.size() % 2) throw UsageError("hex string must have even length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw UsageError("invalid hex character");
    };
    std::vector<uint8_t> out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<uint8_t>((nib(s[2 * i]) << 4) | nib(s[2 * i + 1]));
    }
    return out;
}

struct SeedFlags {
    std::string task_id;
    std::string nonce;
    std::string seed_hex;
    bool has_task = false;
    bool has_nonce = false;
};

void add_seed_flags(CLI::App* cmd, SeedFlags& f)
{
    cmd->add_option("--task-id", f.task_id, "task identifier bound into the seed")
        ->each([&f](const std::string&) { f.has_task = true; });
    cmd->add_option("--nonce", f.nonce, "per-instance nonce bound into the seed")
        ->each([&f](const std::string&) { f.has_nonce = true; });
    cmd->add_option("--seed-hex", f.seed_hex,
                    "raw 32-byte seed (hex). UNSAFE: bypasses task binding, so "
                    "distinct instances may share an arena; for test vectors only");
}

void resolve_seed(const SeedFlags& f, uint8_t seed[32])
{
    if (!f.seed_hex.empty()) {
        const auto bytes = from_hex(f.seed_hex);
        if (bytes.size() != 32) throw UsageError("--seed-hex must be 64 hex characters");
        std::memcpy(seed, bytes.data(), 32);
        return;
    }
    if (!f.has_task || !f.has_nonce) {
        throw UsageError("--task-id and --nonce are required (or --seed-hex)");
    }
    check(posme_derive_seed(f.task_id.data(), f.task_id.size(), f.nonce.data(),
                            f.nonce.size(), seed));
}

std::vector<uint8_t> read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw UsageError("cannot open " + path);
    const auto size = in.tellg();
    in.seekg(0);
    std::vector<uint8_t> buf(static_cast<size_t>(size));
    in.read(reinterpret_cast<char*>(buf.data()), size);
    if (!in) throw UsageError("cannot read " + path);
    return buf;
}

void write_file(const std::string& path, const uint8_t* data, size_t len)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) throw UsageError("cannot write " + path);
}

// Printed-table rounding: integers for large ratios, one decimal in the tens,
// two below that.
std::string fmt_ratio(double x)
{
    char buf[64];
    if (x >= 100) {
        std::snprintf(buf, sizeof(buf), "%.0f", x);
    } else if (x >= 10) {
        std::snprintf(buf, sizeof(buf), "%.1f", x);
    } else {
        std::snprintf(buf, sizeof(buf), "%.2f", x);
    }
    return buf;
}

std::string fmt_int(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.0f", x);
    return buf;
}

// ---- subcommand payloads ----

struct GenArgs {
    SeedFlags seed;
    uint8_t d_hc = 24;
    uint64_t rho = 4;
    uint16_t d = 8;
    std::string out_dir;
    bool lean = false;
    bool allow_toy = false;
    bool mixing = false;
    bool json = false;
};

int run_gen(const GenArgs& a)
{
    posme_params p{};
    p.d_hc = a.d_hc;
    p.steps = a.rho << a.d_hc;
    p.reads_per_step = a.d;
    p.challenges = 128;
    p.recursion_depth = 3;
    check(posme_params_validate(&p, a.allow_toy ? 1 : 0));

    uint8_t seed[32];
    resolve_seed(a.seed, seed);

    posme_run* run = nullptr;
    check(posme_gen(&p, seed, a.lean ? 1 : 0, &run));
    check(posme_run_save(run, a.out_dir.c_str()));

    uint8_t t_k[32];
    check(posme_run_final_transcript(run, t_k));

    nlohmann::json out = {
        {"run_dir", a.out_dir},
        {"d_hc", p.d_hc},
        {"steps", p.steps},
        {"reads_per_step", p.reads_per_step},
        {"seed", hex(seed, 32)},
        {"final_transcript", hex(t_k, 32)},
        {"lean", a.lean},
    };
    if (a.mixing) {
        posme_mixing_report m{};
        check(posme_mixing_stats(run, &m));
        out["mixing"] = {{"read_chi2_per_df", m.read_chi2_per_df},
                         {"write_chi2_per_df", m.write_chi2_per_df},
                         {"read_sigma", m.read_sigma},
                         {"write_sigma", m.write_sigma},
                         {"unwritten_fraction", m.unwritten_fraction},
                         {"max_read_over_mean", m.max_read_over_mean},
                         {"max_write_over_mean", m.max_write_over_mean}};
    }
    posme_run_free(run);

    if (a.json) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "run written to " << a.out_dir << "\n"
                  << "T_K = " << hex(t_k, 32) << "\n";
    }
    return kExitOk;
}

struct ProveArgs {
    std::string run_dir;
    uint16_t q = 128;
    uint8_t r = 3;
    std::string out_file;
    bool allow_toy = false;
};

int run_prove(const ProveArgs& a)
{
    posme_run* run = nullptr;
    check(posme_run_load(a.run_dir.c_str(), &run));

    posme_params p{};
    check(posme_run_params(run, &p));
    p.challenges = a.q;
    p.recursion_depth = a.r;
    check(posme_params_validate(&p, a.allow_toy ? 1 : 0));

    uint8_t* proof = nullptr;
    size_t len = 0;
    check(posme_prove(run, a.q, a.r, &proof, &len));
    posme_run_free(run);
    write_file(a.out_file, proof, len);
    posme_buffer_free(proof);

    std::cout << "proof written to " << a.out_file << " (" << len << " bytes, estimate "
              << posme_proof_size_estimate(&p) << ")\n";
    return kExitOk;
}

struct VerifyArgs {
    SeedFlags seed;
    std::string proof_file;
};

int run_verify(const VerifyArgs& a)
{
    const std::vector<uint8_t> bytes = read_file(a.proof_file);

    posme_params p{};
    const posme_status peek = posme_proof_peek_params(&bytes[0], bytes.size(), &p);
    if (peek != POSME_OK) {
        std::cerr << "malformed proof: " << posme_last_error() << "\n";
        return kExitUsage;
    }
    std::cout << "proof parameters: d_hc=" << unsigned(p.d_hc) << " steps=" << p.steps
              << " d=" << p.reads_per_step << " q=" << p.challenges
              << " r=" << unsigned(p.recursion_depth) << "\n";

    uint8_t seed[32];
    resolve_seed(a.seed, seed);

    posme_verify_report rep{};
    check(posme_verify(bytes.data(), bytes.size(), seed, &p, &rep));
    if (rep.accepted) {
        std::cout << "accept\n";
        return kExitOk;
    }
    std::cout << "reject: check=" << rep.check;
    if (rep.failing_challenge) std::cout << " challenge=" << rep.failing_challenge;
    if (rep.detail[0]) std::cout << " (" << rep.detail << ")";
    std::cout << "\n";
    return std::strcmp(rep.check, "parse") == 0 ? kExitUsage : kExitReject;
}

struct StatsArgs {
    std::string run_dir;
    bool json = false;
};

int run_stats(const StatsArgs& a)
{
    posme_run* run = nullptr;
    check(posme_run_load(a.run_dir.c_str(), &run));
    posme_mixing_report m{};
    check(posme_mixing_stats(run, &m));
    posme_run_free(run);

    const double dr = static_cast<double>(m.reads_per_step) * m.write_density;
    nlohmann::json out = {
        {"arena_blocks", m.arena_blocks},
        {"steps", m.steps},
        {"reads_per_step", m.reads_per_step},
        {"write_density", m.write_density},
        {"read_chi2_per_df", m.read_chi2_per_df},
        {"write_chi2_per_df", m.write_chi2_per_df},
        {"read_sigma", m.read_sigma},
        {"write_sigma", m.write_sigma},
        {"unwritten_fraction", m.unwritten_fraction},
        {"max_read_over_mean", m.max_read_over_mean},
        {"max_write_over_mean", m.max_write_over_mean},
    };
    if (a.json) {
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }
    std::printf("Mixing statistics (N=%" PRIu64 ", K=%" PRIu64 ", d=%u, rho=%g)\n",
                m.arena_blocks, m.steps, m.reads_per_step, m.write_density);
    std::printf("%-18s %-12s %s\n", "Metric", "Value", "Expected");
    std::printf("%-18s %-12.6f %.6f\n", "Read chi2/df", m.read_chi2_per_df, 1.0);
    std::printf("%-18s %-12.6f %.6f\n", "Write chi2/df", m.write_chi2_per_df, 1.0);
    std::printf("%-18s %-12.4f %.4f (sqrt(d*rho))\n", "Read sigma", m.read_sigma,
                std::sqrt(dr));
    std::printf("%-18s %-12.4f %.4f (sqrt(rho))\n", "Write sigma", m.write_sigma,
                std::sqrt(m.write_density));
    std::printf("%-18s %-11.4f%% %.4f%% (exp(-rho))\n", "Unwritten frac.",
                100 * m.unwritten_fraction, 100 * std::exp(-m.write_density));
    std::printf("%-18s %-12.2f < 3 (Chernoff)\n", "Max read / mean", m.max_read_over_mean);
    std::printf("%-18s %-12.2f (Poisson tail)\n", "Max write / mean", m.max_write_over_mean);
    return kExitOk;
}

struct BoundsArgs {
    std::vector<double> alphas;
    unsigned rho = 4;
    double d = 8;
    bool json = false;
};

int run_bounds(const BoundsArgs& a)
{
    for (double alpha : a.alphas) {
        if (!(alpha >= 0.0 && alpha < 1.0)) {
            throw UsageError("alpha must lie in [0, 1)");
        }
    }
    nlohmann::json rows = nlohmann::json::array();
    for (double alpha : a.alphas) {
        const double w = posme_cascade_w(alpha, a.rho, a.d);
        const double st = posme_st_product(alpha, a.rho, a.d);
        const double ws = posme_staleness_w(alpha, a.rho, a.d);
        const double sts = posme_staleness_st_product(alpha, a.rho, a.d);
        rows.push_back({{"alpha", alpha},
                        {"branching", a.d * (1 - alpha)},
                        {"w", w},
                        {"st_over_k2", st},
                        {"w_star", ws},
                        {"st_star_over_k2", sts},
                        {"gain", st > 0 ? sts / st : 0}});
    }
    if (a.json) {
        std::cout << nlohmann::json{{"rho", a.rho}, {"d", a.d}, {"rows", rows}}.dump(2)
                  << "\n";
        return kExitOk;
    }
    std::printf("Space-time product at d=%g, rho=%u\n", a.d, a.rho);
    std::printf("%-8s %-10s %-8s %-10s %s\n", "alpha", "d(1-a)", "W", "S.T/K^2", "regime");
    for (const auto& r : rows) {
        const double b = r["branching"];
        const char* regime = b > 1 + 1e-12 ? "supercritical"
                             : b < 1 - 1e-12 ? "subcritical"
                                             : "critical";
        std::printf("%-8.4g %-10.3g %-8s %-10s %s\n", r["alpha"].get<double>(), b,
                    fmt_int(r["w"]).c_str(), fmt_ratio(r["st_over_k2"]).c_str(), regime);
    }
    std::printf("\nTemporal-staleness strengthening\n");
    std::printf("%-8s %-8s %-8s %-10s %-10s %s\n", "alpha", "W", "W*", "S.T/K^2",
                "S.T*/K^2", "gain");
    for (const auto& r : rows) {
        std::printf("%-8.4g %-8s %-8s %-10s %-10s %.1fx\n", r["alpha"].get<double>(),
                    fmt_int(r["w"]).c_str(), fmt_int(r["w_star"]).c_str(),
                    fmt_ratio(r["st_over_k2"]).c_str(),
                    fmt_ratio(r["st_star_over_k2"]).c_str(), r["gain"].get<double>());
    }
    return kExitOk;
}

struct TmtoArgs {
    std::string run_dir;
    double alpha = 0.5;
    uint64_t seed = 1;
    bool json = false;
};

int run_tmto(const TmtoArgs& a)
{
    if (!(a.alpha >= 0.0 && a.alpha <= 1.0)) throw UsageError("alpha must lie in [0, 1]");
    posme_run* run = nullptr;
    check(posme_run_load(a.run_dir.c_str(), &run));
    posme_tmto_report r{};
    check(posme_tmto_simulate(run, a.alpha, a.seed, &r));
    posme_run_free(run);

    nlohmann::json out = {
        {"alpha", r.alpha},
        {"rho", r.rho},
        {"d", r.d},
        {"analytic_bound", r.analytic_bound},
        {"simulated_cost", r.simulated_cost},
        {"simulated_cost_final_chain", r.simulated_cost_final},
        {"penalty_ratio", r.penalty_ratio},
        {"penalty_ratio_final_chain", r.penalty_ratio_final},
        {"misses", r.misses},
        {"mean_chain_len", r.mean_chain_len},
    };
    if (a.json) {
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }
    std::printf("TMTO simulation: alpha=%g rho=%g d=%u\n", r.alpha, r.rho, r.d);
    std::printf("  honest cost (K*d):        %.0f hashes\n",
                r.simulated_cost / std::max(r.penalty_ratio, 1e-300));
    std::printf("  simulated cost:           %.0f hashes (%.2fx honest)\n",
                r.simulated_cost, r.penalty_ratio);
    std::printf("  simulated, final chains:  %.0f hashes (%.2fx honest)\n",
                r.simulated_cost_final, r.penalty_ratio_final);
    std::printf("  analytic bound:           %.0f hashes\n", r.analytic_bound);
    std::printf("  misses: %" PRIu64 ", mean prior overwrites per miss: %.3f\n", r.misses,
                r.mean_chain_len);
    return kExitOk;
}

struct AdaptiveArgs {
    std::string run_dir;
    double alpha = 0.25;
    std::string policy = "all";
    uint64_t seed = 1;
    bool json = false;
};

int run_adaptive(const AdaptiveArgs& a)
{
    if (!(a.alpha >= 0.0 && a.alpha <= 1.0)) throw UsageError("alpha must lie in [0, 1]");
    std::vector<int> policies;
    if (a.policy == "all") {
        policies = {POSME_POLICY_FIXED_RANDOM, POSME_POLICY_MOST_RECENTLY_WRITTEN,
                    POSME_POLICY_MOST_FREQUENTLY_READ};
    } else if (a.policy == "random") {
        policies = {POSME_POLICY_FIXED_RANDOM};
    } else if (a.policy == "mrw") {
        policies = {POSME_POLICY_MOST_RECENTLY_WRITTEN};
    } else if (a.policy == "mfr") {
        policies = {POSME_POLICY_MOST_FREQUENTLY_READ};
    } else {
        throw UsageError("policy must be one of: all, random, mrw, mfr");
    }

    posme_run* run = nullptr;
    check(posme_run_load(a.run_dir.c_str(), &run));
    static const char* names[] = {"fixed_random", "most_recently_written",
                                  "most_frequently_read"};
    nlohmann::json rows = nlohmann::json::array();
    for (int p : policies) {
        posme_adaptive_report r{};
        check(posme_adaptive_simulate(run, a.alpha, p, a.seed, &r));
        rows.push_back({{"policy", names[p]},
                        {"alpha", r.alpha},
                        {"reads", r.reads},
                        {"hits", r.hits},
                        {"hit_rate", r.hit_rate}});
    }
    posme_run_free(run);

    if (a.json) {
        std::cout << nlohmann::json{{"rows", rows}}.dump(2) << "\n";
        return kExitOk;
    }
    std::printf("Adaptive-caching hit rates at alpha=%g\n", a.alpha);
    std::printf("%-24s %-12s %-12s %s\n", "policy", "reads", "hits", "hit rate");
    for (const auto& r : rows) {
        std::printf("%-24s %-12" PRIu64 " %-12" PRIu64 " %.6f\n",
                    r["policy"].get<std::string>().c_str(), r["reads"].get<uint64_t>(),
                    r["hits"].get<uint64_t>(), r["hit_rate"].get<double>());
    }
    return kExitOk;
}

struct BenchStepsArgs {
    std::vector<uint8_t> d_hc_list{16};
    uint64_t rho = 4;
    uint16_t d = 8;
    int reps = 3;
    uint64_t steps = uint64_t{1} << 17;
    bool json = false;
};

int run_bench_steps(const BenchStepsArgs& a)
{
    uint8_t seed[32] = {};
    nlohmann::json rows = nlohmann::json::array();
    if (!a.json) {
        std::printf("%-6s %-12s %-10s %-12s %-10s %s\n", "d_hc", "arena", "K", "ns/step",
                    "hash %", "init s");
    }
    for (uint8_t d_hc : a.d_hc_list) {
        posme_bench_report r{};
        const posme_status s =
            posme_bench_steps(d_hc, a.rho, a.d, a.reps, a.steps, seed, &r);
        if (s != POSME_OK) {
            std::fprintf(stderr, "d_hc=%u skipped: %s\n", unsigned(d_hc),
                         posme_last_error());
            continue;
        }
        rows.push_back({{"d_hc", r.d_hc},
                        {"arena_bytes", r.arena_bytes},
                        {"steps", r.steps},
                        {"reps", r.reps},
                        {"ns_per_step", r.ns_per_step},
                        {"hash_fraction", r.hash_fraction},
                        {"init_seconds", r.init_seconds},
                        {"compressions_per_step", r.compressions_per_step},
                        {"pinned", r.pinned != 0},
                        {"machine", r.machine},
                        {"timestamp", r.timestamp}});
        if (!a.json) {
            std::printf("%-6u %-12" PRIu64 " %-10" PRIu64 " %-12.1f %-10.2f %.2f\n",
                        unsigned(r.d_hc), r.arena_bytes, r.steps, r.ns_per_step,
                        100 * r.hash_fraction, r.init_seconds);
        }
    }
    if (a.json) std::cout << nlohmann::json{{"rows", rows}}.dump(2) << "\n";
    return kExitOk;
}

struct BenchChaseArgs {
    uint64_t mib = 64;
    uint64_t steps = 65536;
    uint64_t seed = 1;
    bool json = false;
};

int run_bench_chase(const BenchChaseArgs& a)
{
    double ns = 0;
    check(posme_bench_pointer_chase(a.mib << 20, a.steps, a.seed, &ns));
    if (a.json) {
        std::cout << nlohmann::json{{"arena_bytes", a.mib << 20},
                                    {"steps", a.steps},
                                    {"ns_per_load", ns}}
                         .dump(2)
                  << "\n";
    } else {
        std::printf("%" PRIu64 " MiB arena, %" PRIu64 " dependent loads: %.1f ns/load\n",
                    a.mib, a.steps, ns);
    }
    return kExitOk;
}

struct BenchInitArgs {
    uint8_t d_hc = 20;
    bool json = false;
};

int run_bench_init(const BenchInitArgs& a)
{
    uint8_t seed[32] = {};
    double s = 0;
    check(posme_bench_init(a.d_hc, seed, &s));
    if (a.json) {
        std::cout << nlohmann::json{{"d_hc", a.d_hc}, {"seconds", s}}.dump(2) << "\n";
    } else {
        std::printf("init d_hc=%u: %.3f s\n", unsigned(a.d_hc), s);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"posme: latency-bound proof of sequential memory execution"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "initialize an arena and execute K steps");
    add_seed_flags(gen_cmd, gen_args.seed);
    gen_cmd->add_option("--d-hc", gen_args.d_hc, "arena dimension (N = 2^d_hc)")
        ->required();
    gen_cmd->add_option("--rho", gen_args.rho, "write density (K = rho * N)");
    gen_cmd->add_option("--d", gen_args.d, "reads per step");
    gen_cmd->add_option("--out", gen_args.out_dir, "run directory")->required();
    gen_cmd->add_flag("--lean", gen_args.lean, "keep only roots and transcripts");
    gen_cmd->add_flag("--allow-toy", gen_args.allow_toy, "relax recommended floors");
    gen_cmd->add_flag("--mixing", gen_args.mixing, "print mixing statistics after the run");
    gen_cmd->add_flag("--json", gen_args.json, "JSON output");

    ProveArgs prove_args;
    auto* prove_cmd = app.add_subcommand("prove", "produce a challenge proof for a run");
    prove_cmd->add_option("--run", prove_args.run_dir, "run directory")->required();
    prove_cmd->add_option("--q", prove_args.q, "challenge count");
    prove_cmd->add_option("--r", prove_args.r, "provenance recursion depth");
    prove_cmd->add_option("--out", prove_args.out_file, "proof file")->required();
    prove_cmd->add_flag("--allow-toy", prove_args.allow_toy, "relax recommended floors");

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "verify a proof file");
    add_seed_flags(verify_cmd, verify_args.seed);
    verify_cmd->add_option("--proof", verify_args.proof_file, "proof file")->required();

    StatsArgs stats_args;
    auto* stats_cmd = app.add_subcommand("stats", "mixing statistics of a recorded run");
    stats_cmd->add_option("--run", stats_args.run_dir, "run directory")->required();
    stats_cmd->add_flag("--json", stats_args.json, "JSON output");

    BoundsArgs bounds_args;
    auto* bounds_cmd =
        app.add_subcommand("bounds", "analytic space-time bounds for storage fractions");
    bounds_cmd->add_option("--alpha", bounds_args.alphas, "storage fractions in [0, 1)")
        ->required()
        ->delimiter(',');
    bounds_cmd->add_option("--rho", bounds_args.rho, "write density");
    bounds_cmd->add_option("--d", bounds_args.d, "reads per step");
    bounds_cmd->add_flag("--json", bounds_args.json, "JSON output");

    TmtoArgs tmto_args;
    auto* tmto_cmd =
        app.add_subcommand("tmto", "simulate recomputation cost for a stored fraction");
    tmto_cmd->add_option("--run", tmto_args.run_dir, "run directory")->required();
    tmto_cmd->add_option("--alpha", tmto_args.alpha, "stored fraction in [0, 1]")
        ->required();
    tmto_cmd->add_option("--seed", tmto_args.seed, "sampling seed");
    tmto_cmd->add_flag("--json", tmto_args.json, "JSON output");

    AdaptiveArgs adaptive_args;
    auto* adaptive_cmd =
        app.add_subcommand("adaptive", "hit rates for history-driven caching policies");
    adaptive_cmd->add_option("--run", adaptive_args.run_dir, "run directory")->required();
    adaptive_cmd->add_option("--alpha", adaptive_args.alpha, "stored fraction in [0, 1]");
    adaptive_cmd->add_option("--policy", adaptive_args.policy, "all|random|mrw|mfr");
    adaptive_cmd->add_option("--seed", adaptive_args.seed, "sampling seed");
    adaptive_cmd->add_flag("--json", adaptive_args.json, "JSON output");

    auto* bench_cmd = app.add_subcommand("bench", "latency and throughput measurements");
    bench_cmd->require_subcommand(1);

    BenchStepsArgs bsteps;
    auto* bsteps_cmd = bench_cmd->add_subcommand("steps", "step loop timing and hash fraction");
    bsteps_cmd->add_option("--d-hc", bsteps.d_hc_list, "arena dimensions")->delimiter(',');
    bsteps_cmd->add_option("--rho", bsteps.rho, "write density");
    bsteps_cmd->add_option("--d", bsteps.d, "reads per step");
    bsteps_cmd->add_option("--reps", bsteps.reps, "repetitions (median)");
    bsteps_cmd->add_option("--steps", bsteps.steps, "timed step cap (0 = rho*N)");
    bsteps_cmd->add_flag("--json", bsteps.json, "JSON output");

    BenchChaseArgs bchase;
    auto* bchase_cmd = bench_cmd->add_subcommand("chase", "dependent-load latency");
    bchase_cmd->add_option("--mib", bchase.mib, "arena size in MiB");
    bchase_cmd->add_option("--steps", bchase.steps, "number of dependent loads");
    bchase_cmd->add_option("--seed", bchase.seed, "permutation seed");
    bchase_cmd->add_flag("--json", bchase.json, "JSON output");

    BenchInitArgs binit;
    auto* binit_cmd = bench_cmd->add_subcommand("init", "initialization wall time");
    binit_cmd->add_option("--d-hc", binit.d_hc, "arena dimension");
    binit_cmd->add_flag("--json", binit.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints help or the error
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) return run_gen(gen_args);
        if (prove_cmd->parsed()) return run_prove(prove_args);
        if (verify_cmd->parsed()) return run_verify(verify_args);
        if (stats_cmd->parsed()) return run_stats(stats_args);
        if (bounds_cmd->parsed()) return run_bounds(bounds_args);
        if (tmto_cmd->parsed()) return run_tmto(tmto_args);
        if (adaptive_cmd->parsed()) return run_adaptive(adaptive_args);
        if (bench_cmd->parsed()) {
            if (bsteps_cmd->parsed()) return run_bench_steps(bsteps);
            if (bchase_cmd->parsed()) return run_bench_chase(bchase);
            if (binit_cmd->parsed()) return run_bench_init(binit);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
