#ifndef QSS_EXPERIMENT_HPP
#define QSS_EXPERIMENT_HPP

// Experiment drivers behind the CLI: Monte Carlo soundness sweeps with
// Wilson intervals, the measure-early-versus-late equivalence experiment,
// and the backend cross-validation corpus.  Reports keep the raw per-trial
// outcomes alongside the aggregates so they can be re-analyzed.

#include <chrono>
#include <map>
#include <string>

#include <json.hpp>

#include "qss/protocols/adversaries.hpp"
#include "qss/protocols/mpqc.hpp"
#include "qss/protocols/subspace.hpp"
#include "qss/protocols/vqss.hpp"
#include "qss/stats.hpp"

namespace qss {

struct ExperimentConfig {
    std::string experiment = "sweep";
    std::string protocol = "classical-vss";
    std::string adversary = "none";
    std::uint32_t n = 5, t = 1, p = 7, k = 1;
    std::vector<std::uint32_t> k_values;  // sweep axis; defaults to {k}
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string backend = "stabilizer";
    std::string out;

    void validate() const {
        FieldParams check(p, n);  // throws on bad p/n
        (void)check;
        if (trials == 0) throw Error("trials must be positive");
        if (backend != "stabilizer" && backend != "statevector" && backend != "share")
            throw Error("unknown backend '" + backend + "'");
        adversary_by_name(adversary);  // throws on unknown names
    }

    BackendKind backend_kind() const {
        if (backend == "statevector") return BackendKind::Statevector;
        if (backend == "share") return BackendKind::Share;
        return BackendKind::Stabilizer;
    }
};

struct SweepCell {
    std::uint32_t k = 0;
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;
    std::uint64_t bad_accepts = 0;
    stats::WilsonInterval bad_ci;
    double bound = 0;       // 2^{n-k}
    double exact_rate = -1; // strategy-specific rate, when known
    bool violation = false;
    double wall_seconds = 0;
    std::vector<std::uint8_t> raw;  // per-trial bad-acceptance flags

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["k"] = k;
        j["trials"] = trials;
        j["accepted"] = accepted;
        j["bad_accepts"] = bad_accepts;
        j["bad_rate"] = trials ? double(bad_accepts) / double(trials) : 0.0;
        j["wilson_lo"] = bad_ci.lo;
        j["wilson_hi"] = bad_ci.hi;
        j["bound"] = bound;
        if (exact_rate >= 0) j["exact_rate"] = exact_rate;
        j["violation"] = violation;
        j["wall_seconds"] = wall_seconds;
        j["raw"] = raw;
        return j;
    }
};

struct Report {
    std::string experiment;
    nlohmann::json meta;
    std::vector<SweepCell> cells;
    nlohmann::json extra;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["experiment"] = experiment;
        j["meta"] = meta;
        j["cells"] = nlohmann::json::array();
        for (const auto& c : cells) j["cells"].push_back(c.to_json());
        if (!extra.is_null()) j["extra"] = extra;
        return j;
    }

    std::string render_text() const {
        std::string out = "experiment: " + experiment + "\n";
        if (!cells.empty()) {
            out += "  k      trials   accepted  bad    rate       wilson99           "
                   "bound      flag\n";
            char line[256];
            for (const auto& c : cells) {
                std::snprintf(line, sizeof line,
                              "  %-6u %-8llu %-9llu %-6llu %-10.6f [%-8.6f,%-8.6f] %-10.3g %s\n",
                              c.k, (unsigned long long)c.trials,
                              (unsigned long long)c.accepted,
                              (unsigned long long)c.bad_accepts,
                              c.trials ? double(c.bad_accepts) / double(c.trials) : 0.0,
                              c.bad_ci.lo, c.bad_ci.hi, c.bound,
                              c.violation ? "VIOLATION" : "ok");
                out += line;
            }
        }
        if (!extra.is_null()) out += extra.dump(2) + "\n";
        return out;
    }
};

// --- soundness sweep -----------------------------------------------------------

// One trial of the configured protocol; returns {accepted, bad_accept}.
inline std::pair<bool, bool> soundness_trial(const ExperimentConfig& cfg, std::uint32_t k,
                                             std::uint64_t seed) {
    AdversaryStrategy adv = adversary_by_name(cfg.adversary);
    if (cfg.protocol == "classical-vss") {
        ClassicalVssParams params{FieldParams(cfg.p, cfg.n), cfg.t, k};
        PlayerSet players(cfg.n, cfg.t, {0});
        if (cfg.adversary == "none") players = PlayerSet(cfg.n, cfg.t);
        auto res = run_classical_vss(params, 2, players, adv, seed);
        return {res.passed, res.passed && !res.tree_two_good};
    }
    if (cfg.protocol == "code-check" || cfg.protocol == "dual-code-check") {
        SubspaceParams params;
        params.field = FieldParams(cfg.p, cfg.n);
        params.t = cfg.t;
        params.k = k;
        params.dual = cfg.protocol == "dual-code-check";
        params.backend = cfg.backend_kind();
        PlayerSet players =
            cfg.adversary == "none" ? PlayerSet(cfg.n, cfg.t) : PlayerSet(cfg.n, cfg.t, {0});
        AdversaryStrategy sp_adv =
            cfg.adversary == "guess-ahead" ? sp_guess_ahead(2) : adv;
        auto res = run_subspace_check(params, players, sp_adv, seed);
        bool bad = res.accepted && !target_in_claimed_span(res, players, seed);
        return {res.accepted, bad};
    }
    if (cfg.protocol == "vqss") {
        VqssParams params;
        params.field = FieldParams(cfg.p, cfg.n);
        params.t = cfg.t;
        params.k = k;
        params.backend = cfg.backend_kind();
        PlayerSet players =
            cfg.adversary == "none" ? PlayerSet(cfg.n, cfg.t) : PlayerSet(cfg.n, cfg.t, {0});
        ShareRequest req = ShareRequest::basis(1);
        if (cfg.adversary == "claim-liar") {
            req.claim = KnownState::Zero;  // shares 1 while claiming zero
            auto res = vqss_share_and_verify(params, req, players, honest_adversary(), seed);
            return {res.passed, res.passed};
        }
        auto res = vqss_share_and_verify(params, req, players, adv, seed);
        return {res.passed, false};
    }
    throw Error("no soundness sweep for protocol '" + cfg.protocol + "'");
}

inline Report soundness_sweep(const ExperimentConfig& cfg) {
    Report rep;
    rep.experiment = "sweep";
    rep.meta = {{"protocol", cfg.protocol}, {"adversary", cfg.adversary},
                {"n", cfg.n},               {"t", cfg.t},
                {"p", cfg.p},               {"trials", cfg.trials},
                {"seed", cfg.seed}};
    std::vector<std::uint32_t> ks = cfg.k_values.empty()
                                        ? std::vector<std::uint32_t>{cfg.k}
                                        : cfg.k_values;
    for (std::uint32_t k : ks) {
        SweepCell cell;
        cell.k = k;
        cell.trials = cfg.trials;
        cell.bound = std::pow(2.0, double(cfg.n) - double(k));
        if (cfg.adversary == "guess-ahead" || cfg.adversary == "claim-liar")
            cell.exact_rate = std::pow(double(cfg.p), -double(k));
        auto start = std::chrono::steady_clock::now();
        for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
            CounterRng trial_seed(cfg.seed, trial);  // derived stream per trial
            auto [accepted, bad] =
                soundness_trial(cfg, k, trial_seed.next_u64() ^ (k * 0x9e37ull));
            cell.accepted += accepted;
            cell.bad_accepts += bad;
            cell.raw.push_back(bad ? 1 : 0);
        }
        cell.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        cell.bad_ci = stats::wilson(cell.bad_accepts, cell.trials);
        double reference = cell.exact_rate >= 0 ? std::max(cell.exact_rate, 0.0)
                                                : std::min(cell.bound, 1.0);
        cell.violation = cell.bad_ci.lo > std::min(1.0, std::max(cell.bound, reference));
        rep.cells.push_back(std::move(cell));
    }
    return rep;
}

// --- measure-early / measure-late equivalence ------------------------------------

inline Report q2c_experiment(const ExperimentConfig& cfg, bool include_control = true) {
    Report rep;
    rep.experiment = "q2c";
    rep.meta = {{"protocol", "code-check"}, {"adversary", cfg.adversary},
                {"n", cfg.n},              {"t", cfg.t},
                {"p", cfg.p},              {"k", cfg.k},
                {"trials", cfg.trials},    {"seed", cfg.seed}};
    AdversaryStrategy adv = adversary_by_name(cfg.adversary);
    PlayerSet players = cfg.adversary == "none" ? PlayerSet(cfg.n, cfg.t)
                                                : PlayerSet(cfg.n, cfg.t, {cfg.n - 1});

    // Outcome tuples are too sparse for a direct per-word test.  Compare a
    // battery of low-dimensional projections: per-position marginals, one
    // pairwise joint, and the tuple of code-check functionals supported on
    // the honest positions (the part of the joint distribution the
    // statement actually constrains).  P-values combine by Bonferroni.
    RsCode check_code(FieldParams(cfg.p, cfg.n), cfg.n - 2 * cfg.t - 1);
    std::vector<std::size_t> honest;
    for (std::size_t i = 0; i < cfg.n; ++i)
        if (!players.is_cheater(i)) honest.push_back(i);
    std::vector<Codeword> functionals =
        code_basis_avoiding(check_code.dual(), players.cheaters);

    struct Hists {
        std::vector<std::map<Fe, std::uint64_t>> marg;
        std::map<std::uint64_t, std::uint64_t> pair;
        std::map<std::uint64_t, std::uint64_t> synd;
    };
    auto collect = [&](SubspaceParams::Q2c mode, bool control, std::uint64_t base) {
        Hists h;
        for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
            SubspaceParams params;
            params.field = FieldParams(cfg.p, cfg.n);
            params.t = cfg.t;
            params.k = cfg.k;
            params.q2c = mode;
            params.q2c_control = control;
            auto res = run_subspace_check(params, players, adv, base + trial);
            if (h.marg.empty()) h.marg.resize(res.h0_outcomes.size());
            for (std::size_t i = 0; i < res.h0_outcomes.size(); ++i)
                h.marg[i][res.h0_outcomes[i]]++;
            if (res.h0_outcomes.size() >= 2)
                h.pair[std::uint64_t(res.h0_outcomes[0]) * cfg.p + res.h0_outcomes[1]]++;
            std::uint64_t key = 0;
            for (const Codeword& c : functionals) {
                std::uint64_t acc = 0;
                for (std::size_t i = 0; i < honest.size() && i < res.h0_outcomes.size(); ++i)
                    acc += std::uint64_t(c[honest[i]]) * res.h0_outcomes[i] % cfg.p;
                key = key * cfg.p + acc % cfg.p;
            }
            h.synd[key]++;
        }
        return h;
    };
    auto combined_pvalue = [&](const Hists& a, const Hists& b) {
        double min_p = 1.0;
        std::size_t tests = 0;
        for (std::size_t i = 0; i < a.marg.size() && i < b.marg.size(); ++i) {
            min_p = std::min(min_p, stats::chi2_two_sample_pvalue(a.marg[i], b.marg[i]));
            ++tests;
        }
        min_p = std::min(min_p, stats::chi2_two_sample_pvalue(a.pair, b.pair));
        ++tests;
        min_p = std::min(min_p, stats::chi2_two_sample_pvalue(a.synd, b.synd));
        ++tests;
        return std::min(1.0, min_p * double(tests));
    };

    auto late = collect(SubspaceParams::Q2c::MeasureAtEnd, false, cfg.seed);
    auto early = collect(SubspaceParams::Q2c::MeasureBeforeVerify, false, cfg.seed + 7777777);
    double pval = combined_pvalue(early, late);
    rep.extra["equivalence_pvalue"] = pval;
    rep.extra["equivalence_pass"] = pval > 0.01;

    if (include_control) {
        auto late_c = collect(SubspaceParams::Q2c::MeasureAtEnd, true, cfg.seed + 555);
        auto early_c =
            collect(SubspaceParams::Q2c::MeasureBeforeVerify, true, cfg.seed + 999);
        double pc = combined_pvalue(early_c, late_c);
        rep.extra["control_pvalue"] = pc;
        rep.extra["control_detects_disturbance"] = pc < 0.01;
    }
    return rep;
}

// --- backend cross-validation ------------------------------------------------------

inline Circuit random_clifford_circuit(std::uint32_t p, std::uint32_t m, std::size_t gates,
                                       CounterRng& rng) {
    Circuit c(m, p);
    for (std::size_t i = 0; i < gates; ++i) {
        std::uint32_t w1 = std::uint32_t(rng.next_below(m));
        std::uint32_t w2 = std::uint32_t(rng.next_below(m));
        if (w2 == w1) w2 = (w1 + 1) % m;
        switch (rng.next_below(7)) {
            case 0: c.push(GateOp::x(rng.field_element_nz(p), w1)); break;
            case 1: c.push(GateOp::z(rng.field_element_nz(p), w1)); break;
            case 2: c.push(GateOp::cadd(rng.field_element_nz(p), w1, w2)); break;
            case 3: c.push(GateOp::mul(rng.field_element_nz(p), w1)); break;
            case 4: c.push(GateOp::swap(w1, w2)); break;
            case 5: c.push(GateOp::fourier(rng.field_element_nz(p), w1)); break;
            case 6: c.push(GateOp::fourier_inv(rng.field_element_nz(p), w1)); break;
        }
    }
    return c;
}

struct XvalCell {
    std::uint32_t p = 0, qupits = 0;
    std::size_t gates = 0;
    double state_fidelity = 0;
    double tv_distance = 0;
    bool pass = false;
};

inline Report xval_experiment(std::size_t circuits, std::size_t max_gates,
                              std::uint32_t max_qupits, std::vector<std::uint32_t> primes,
                              std::uint64_t shots, std::uint64_t seed,
                              double tv_tol = 0.02) {
    Report rep;
    rep.experiment = "xval";
    rep.meta = {{"circuits", circuits}, {"max_gates", max_gates},
                {"max_qupits", max_qupits}, {"shots", shots}, {"seed", seed}};
    CounterRng rng(seed, 0);
    nlohmann::json rows = nlohmann::json::array();
    bool all_pass = true;
    for (std::size_t idx = 0; idx < circuits; ++idx) {
        std::uint32_t p = primes[rng.next_below(primes.size())];
        // keep p^m modest so sampling noise sits well under the tolerance
        std::uint32_t cap = max_qupits;
        while (cap > 2 && std::pow(double(p), double(cap)) > 130.0) --cap;
        std::uint32_t m = 2 + std::uint32_t(rng.next_below(cap - 1));
        std::size_t gates = 5 + rng.next_below(max_gates - 4);
        Circuit c = random_clifford_circuit(p, m, gates, rng);

        // pure-state comparison
        StabilizerTableau tab(p, m);
        StateVector sv(p, m);
        CounterRng r1(seed + idx, 1), r2(seed + idx, 1);
        tab.run(c, r1);
        sv.run(c, r2);
        double fid = fidelity(tab.to_statevector(), sv);

        // measurement histograms on all wires
        std::uint64_t dim = 1;
        for (std::uint32_t w = 0; w < m; ++w) dim *= p;
        std::vector<double> exact = sv.full_distribution();
        std::vector<double> hist(dim, 0.0);
        for (std::uint64_t s = 0; s < shots; ++s) {
            StabilizerTableau t2 = tab;
            CounterRng mr(seed + idx, 100 + s);
            std::uint64_t word = 0, stride = 1;
            for (std::uint32_t w = 0; w < m; ++w) {
                word += stride * t2.measure(w, mr);
                stride *= p;
            }
            hist[word] += 1.0 / double(shots);
        }
        double tv = stats::total_variation(exact, hist);
        bool pass = fid > 1.0 - 1e-9 && tv < tv_tol;
        all_pass &= pass;
        rows.push_back({{"p", p},
                        {"qupits", m},
                        {"gates", gates},
                        {"fidelity", fid},
                        {"tv", tv},
                        {"pass", pass}});
    }
    rep.extra["rows"] = rows;
    rep.extra["all_pass"] = all_pass;
    return rep;
}

// --- single protocol runs for the CLI ----------------------------------------------

struct RunOutcome {
    bool accepted = false;
    SupportSet b;
    std::vector<SupportSet> b_branch;
    Transcript transcript;
    nlohmann::json detail;
};

inline RunOutcome run_protocol_once(const ExperimentConfig& cfg, Fe secret,
                                    const Circuit* circuit = nullptr) {
    cfg.validate();
    AdversaryStrategy adv = adversary_by_name(cfg.adversary);
    PlayerSet players = cfg.adversary == "none" ? PlayerSet(cfg.n, cfg.t)
                                                : PlayerSet(cfg.n, cfg.t, {0});
    RunOutcome out;
    if (cfg.protocol == "classical-vss") {
        ClassicalVssParams params{FieldParams(cfg.p, cfg.n), cfg.t, cfg.k};
        auto res = run_classical_vss(params, secret, players, adv, cfg.seed);
        out.accepted = res.passed;
        out.b = res.acc.b_global;
        out.b_branch = res.acc.b_branch;
        out.transcript = std::move(res.transcript);
        if (res.reconstructed) out.detail["reconstructed"] = *res.reconstructed;
        out.detail["two_good"] = res.tree_two_good;
        return out;
    }
    if (cfg.protocol == "code-check" || cfg.protocol == "dual-code-check") {
        SubspaceParams params;
        params.field = FieldParams(cfg.p, cfg.n);
        params.t = cfg.t;
        params.k = cfg.k;
        params.dual = cfg.protocol == "dual-code-check";
        params.backend = cfg.backend_kind();
        AdversaryStrategy use =
            cfg.adversary == "guess-ahead" ? sp_guess_ahead(2) : adv;
        auto res = run_subspace_check(params, players, use, cfg.seed);
        out.accepted = res.accepted;
        out.b = res.b;
        out.transcript = std::move(res.transcript);
        return out;
    }
    if (cfg.protocol == "vqss") {
        VqssParams params;
        params.field = FieldParams(cfg.p, cfg.n);
        params.t = cfg.t;
        params.k = cfg.k;
        params.backend = cfg.backend_kind();
        auto res =
            vqss_share_and_verify(params, ShareRequest::basis(secret), players, adv, cfg.seed);
        out.accepted = res.passed;
        out.b = res.acc.b_global;
        out.b_branch = res.acc.b_branch;
        if (res.passed) {
            auto wire = vqss_reconstruct(res, 0, (cfg.n + 1) / 2, adv);
            if (wire)
                out.detail["reconstructed_exact"] =
                    res.mem->wire_is_basis_state(*wire, secret);
        }
        out.transcript = std::move(res.tr);
        return out;
    }
    if (cfg.protocol == "top-share") {
        VqssParams params;
        params.field = FieldParams(cfg.p, cfg.n);
        params.t = cfg.t;
        params.k = cfg.k;
        params.backend = cfg.backend_kind();
        auto res = top_level_share(params, ShareRequest::basis(secret), players, adv,
                                   cfg.seed);
        out.accepted = res.passed;
        out.b = res.acc.b_global;
        out.b_branch = res.acc.b_branch;
        if (res.passed) {
            auto wire = top_level_reconstruct(res, 0, adv);
            if (wire)
                out.detail["reconstructed_exact"] =
                    res.mem->wire_is_basis_state(*wire, secret);
        }
        out.transcript = std::move(res.tr);
        return out;
    }
    if (cfg.protocol == "mpqc") {
        MpqcParams params;
        params.field = FieldParams(cfg.p, cfg.n);
        params.t = cfg.t;
        params.k = cfg.k;
        params.backend = cfg.backend_kind();
        Circuit identity(cfg.n, cfg.p);
        const Circuit& c = circuit ? *circuit : identity;
        std::vector<ShareRequest> inputs;
        for (std::uint32_t i = 0; i < cfg.n; ++i)
            inputs.push_back(ShareRequest::basis(Fe((secret + i) % cfg.p)));
        auto res = mpqc_run(params, c, inputs, players, adv, cfg.seed);
        out.accepted = res.ok;
        out.transcript = std::move(res.tr);
        nlohmann::json outs = nlohmann::json::array();
        for (std::uint32_t i = 0; i < cfg.n && res.ok; ++i) {
            auto cv = res.outputs[i] ? res.mem->classical_value(*res.outputs[i])
                                     : std::nullopt;
            outs.push_back(cv ? nlohmann::json(*cv) : nlohmann::json());
        }
        out.detail["outputs"] = outs;
        return out;
    }
    throw Error("unknown protocol '" + cfg.protocol + "'");
}

}  // namespace qss

#endif
