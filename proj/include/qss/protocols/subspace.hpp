#ifndef QSS_PROTOCOLS_SUBSPACE_HPP
#define QSS_PROTOCOLS_SUBSPACE_HPP

// Cut-and-choose membership check for a code subspace: the dealer hands out
// a target system plus k masking systems, random public coins fold the
// target into each mask, and the masks are measured and decoded publicly.
// A deviation on honest positions survives only by predicting every coin.
// The dual variant rotates every share into the Fourier basis first, which
// turns the check into one on the dual code, and rotates the target back at
// the end.

#include <memory>

#include "qss/engine.hpp"
#include "qss/qops.hpp"

namespace qss {

struct SubspaceParams {
    FieldParams field;
    std::uint32_t t = 0;
    std::uint32_t k = 1;
    bool dual = false;
    BackendKind backend = BackendKind::Stabilizer;
    CoinMode coins = CoinMode::IdealVss;
    bool dealer_superposition = true;  // honest target: uniform over the code

    enum class Q2c { Off, MeasureAtEnd, MeasureBeforeVerify };
    Q2c q2c = Q2c::Off;
    bool q2c_control = false;  // disturb one honest share between the phases
};

struct SubspaceResult {
    bool accepted = false;
    SupportSet b;
    Transcript transcript;
    std::unique_ptr<QuantumMemory> mem;
    std::vector<WireId> target;          // the checked system, one wire per player
    RsCode check_code;                   // the code decoded against
    std::vector<Codeword> dealt_words;   // classical dealing path, when taken
    bool dealt_classically = false;
    bool dual = false;
    FeVec h0_outcomes;                   // honest-share measurements (q2c modes)
};

inline SubspaceResult run_subspace_check(const SubspaceParams& params,
                                         const PlayerSet& players,
                                         const AdversaryStrategy& adv, std::uint64_t seed) {
    const std::uint32_t n = params.field.n;
    const std::uint32_t p = params.field.p;
    const std::uint32_t t = params.t;
    if (n < 2 * t + 1) throw Error("code cannot have distance 2t+1");
    RsCode code(params.field, n - 2 * t - 1);  // distance exactly 2t+1

    SubspaceResult res;
    res.check_code = code;
    res.dual = params.dual;
    res.mem = std::make_unique<QuantumMemory>(params.backend, p);
    QuantumMemory& mem = *res.mem;
    Transcript& tr = res.transcript;
    CounterRng rng(seed, 0);
    CounterRng adv_rng(seed, 1);

    // --- sharing -------------------------------------------------------------
    std::vector<std::vector<WireId>> systems;  // systems[l][i], l = 0 is the target
    bool dealer_cheats = players.is_cheater(0) && adv.on_deal != nullptr;
    if (dealer_cheats || !params.dealer_superposition) {
        // classical dealing: k+1 codewords, possibly rewritten by the dealer
        for (std::uint32_t l = 0; l <= params.k; ++l)
            res.dealt_words.push_back(rs_share(code, rng.field_element(p), rng).first);
        if (dealer_cheats) {
            DealView view{&res.dealt_words, p, -1};
            adv.on_deal(view, players, adv_rng);
        }
        for (std::uint32_t l = 0; l <= params.k; ++l) {
            std::vector<WireId> sys;
            for (std::size_t i = 0; i < n; ++i) {
                WireId w = mem.alloc_zero(rng);
                if (res.dealt_words[l][i]) mem.x(w, res.dealt_words[l][i], rng);
                sys.push_back(w);
            }
            systems.push_back(std::move(sys));
        }
        res.dealt_classically = true;
    } else {
        const RsCode prep = params.dual ? code.dual() : code;
        for (std::uint32_t l = 0; l <= params.k; ++l)
            systems.push_back(prepare_code_superposition(mem, prep, rng));
    }
    for (auto& sys : systems)
        for (std::size_t i = 0; i < n; ++i) {
            mem.set_owner(sys[i], std::uint32_t(i));
            tr.send(0, std::int64_t(i), "deal");
        }
    res.target = systems[0];

    // --- optional early measurement (quantum-to-classical experiments) -------
    if (params.q2c == SubspaceParams::Q2c::MeasureBeforeVerify) {
        for (std::size_t i = 0; i < n; ++i) {
            if (players.is_cheater(i)) continue;
            res.h0_outcomes.push_back(mem.measure(systems[0][i], rng));
            if (params.k >= 1) mem.measure(systems[1][i], rng);
        }
        tr.measure(-1, "early", res.h0_outcomes);
    }
    if (params.q2c_control) {
        // a disturbance between the phases; with early measurement done the
        // final distribution must shift, otherwise not
        for (std::size_t i = 0; i < n; ++i)
            if (!players.is_cheater(i)) {
                mem.x(systems[0][i], 1, rng);
                break;
            }
    }

    // --- verification ----------------------------------------------------------
    if (params.dual)
        for (auto& sys : systems)
            for (std::size_t i = 0; i < n; ++i) mem.fourier(sys[i], 1, rng);

    CoinSource coin_source{params.coins};
    FeVec coins = coin_source.draw(params.k, p, players, adv, rng, &tr);
    res.accepted = true;
    for (std::uint32_t l = 1; l <= params.k && res.accepted; ++l) {
        Fe b = coins[l - 1];
        for (std::size_t i = 0; i < n; ++i) mem.cadd(b, systems[0][i], systems[l][i], rng);
        if (adv.on_challenge) {
            std::vector<WireId> owned;
            for (auto& sys : systems)
                for (std::size_t i = 0; i < n; ++i)
                    if (players.is_cheater(i) && mem.alive(sys[i])) owned.push_back(sys[i]);
            AdversaryContext ctx(mem, players, adv_rng.derive(l));
            adv.on_challenge(ctx, owned);
        }
        Codeword word(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            Fe outcome = mem.measure(systems[l][i], rng);
            Fe announced = outcome;
            if (players.is_cheater(i) && adv.on_broadcast)
                announced = adv.on_broadcast(i, outcome, adv_rng) % p;
            word[i] = announced;
        }
        tr.broadcast(-1, "responses", word);
        DecodeOutcome out = rs_decode(code, word);
        if (out.status != DecodeStatus::Decoded) {
            res.accepted = false;
            tr.disqualify(0);
            break;
        }
        for (auto pos : out.error_support) res.b.insert(pos);
        if (res.b.size() > t) {
            res.accepted = false;
            tr.disqualify(0);
            break;
        }
        if (!res.b.empty()) {
            FeVec bv;
            for (auto pos : res.b) bv.push_back(Fe(pos));
            tr.accuse("global", bv);
        }
    }

    if (params.dual)
        for (std::size_t i = 0; i < n; ++i)
            if (mem.alive(systems[0][i])) mem.fourier_inv(systems[0][i], 1, rng);

    if (params.q2c == SubspaceParams::Q2c::MeasureAtEnd) {
        for (std::size_t i = 0; i < n; ++i) {
            if (players.is_cheater(i)) continue;
            res.h0_outcomes.push_back(mem.measure(systems[0][i], rng));
        }
        tr.measure(-1, "final", res.h0_outcomes);
    }
    return res;
}

// Ground truth for soundness accounting: does the surviving target system
// agree with the code away from suspects-and-cheaters?
inline bool target_in_claimed_span(SubspaceResult& res, const PlayerSet& players,
                                   std::uint64_t seed) {
    SupportSet avoid = res.b;
    for (auto c : players.cheaters) avoid.insert(c);
    CounterRng rng(seed, 99);
    // base claim: target in (code span)_avoid; dual claim: the same statement
    // in the Fourier basis (the target was rotated back at the end)
    return in_code_span(*res.mem, res.target, res.check_code, avoid, res.dual, rng);
}

// Cheating dealer for the quantum check: deals a distance-one deviation with
// coin guesses folded into the masks (same structure as the classical one).
inline AdversaryStrategy sp_guess_ahead(std::size_t error_pos, Fe error_val = 1) {
    AdversaryStrategy a;
    a.name = "guess-ahead";
    a.on_deal = [error_pos, error_val](DealView& view, const PlayerSet&, CounterRng& rng) {
        auto& words = *view.words;
        std::uint32_t p = view.p;
        Fe e = error_val % p;
        words[0][error_pos] = fp::add(p, words[0][error_pos], e);
        for (std::size_t l = 1; l < words.size(); ++l) {
            Fe guess = rng.field_element(p);
            words[l][error_pos] = fp::sub(p, words[l][error_pos], fp::mul(p, guess, e));
        }
    };
    return a;
}

}  // namespace qss

#endif
