#ifndef QSS_ENGINE_HPP
#define QSS_ENGINE_HPP

// Round-based execution substrate: the player roster with its static
// corruption set, cumulative accusation bookkeeping, public-coin sources and
// the adversary callback surface.  The engine never lets adversary code
// touch a wire owned by an honest player; that contract is asserted, not
// trusted.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qss/css.hpp"
#include "qss/memory.hpp"
#include "qss/rng.hpp"
#include "qss/rs.hpp"
#include "qss/transcript.hpp"

namespace qss {

enum class ThresholdRegime { EighthN, SixthN, QuarterN };

struct PlayerSet {
    std::uint32_t n = 0;
    std::uint32_t t = 0;
    SupportSet cheaters;  // the static set C, fixed before round 1

    PlayerSet() = default;
    PlayerSet(std::uint32_t n_, std::uint32_t t_, SupportSet c = {})
        : n(n_), t(t_), cheaters(std::move(c)) {
        if (cheaters.size() > t) throw Error("corruption set exceeds the threshold");
        for (auto i : cheaters)
            if (i >= n) throw Error("cheater index out of range");
    }

    bool is_cheater(std::size_t i) const { return cheaters.count(i) > 0; }

    bool satisfies(ThresholdRegime r) const {
        switch (r) {
            case ThresholdRegime::EighthN: return 8 * t < n;
            case ThresholdRegime::SixthN: return 6 * t < n;
            case ThresholdRegime::QuarterN: return 4 * t < n;
        }
        return false;
    }
};

// Cumulative accusation sets: one global set B of bad branches/dealership
// plus one set B_i per branch.  Monotone across rounds; the dealer is
// disqualified as soon as |B| exceeds t.
struct AccusationState {
    SupportSet b_global;
    std::vector<SupportSet> b_branch;
    bool disqualified = false;

    AccusationState() = default;
    explicit AccusationState(std::uint32_t n) : b_branch(n) {}

    void merge_branch(std::size_t branch, const SupportSet& positions, std::uint32_t t,
                      Transcript* tr = nullptr) {
        bool grew = false;
        for (auto pos : positions) grew |= b_branch[branch].insert(pos).second;
        if (grew && tr) {
            FeVec v;
            for (auto pos : b_branch[branch]) v.push_back(Fe(pos));
            tr->accuse("branch" + std::to_string(branch), v);
        }
        if (b_branch[branch].size() > t) fail_branch(branch, t, tr);
    }

    void fail_branch(std::size_t branch, std::uint32_t t, Transcript* tr = nullptr) {
        if (b_global.insert(branch).second && tr) {
            FeVec v;
            for (auto pos : b_global) v.push_back(Fe(pos));
            tr->accuse("global", v);
        }
        if (b_global.size() > t) {
            disqualified = true;
            if (tr) tr->disqualify(-1);
        }
    }
};

// Apply the decode verdicts of one broadcast round to the accusation state:
// per-branch error supports merge into B_i; undecodable branches join B.
inline void update_accusations(AccusationState& acc, std::uint32_t t,
                               const std::vector<std::optional<DecodeOutcome>>& per_branch,
                               Transcript* tr = nullptr) {
    for (std::size_t i = 0; i < per_branch.size(); ++i) {
        if (acc.b_global.count(i)) continue;
        const auto& out = per_branch[i];
        if (!out) continue;
        if (out->status == DecodeStatus::Decoded)
            acc.merge_branch(i, out->error_support, t, tr);
        else
            acc.fail_branch(i, t, tr);
    }
}

// ----------------------------------------------------------------------------
// Adversary interface

// Handle the engine passes to adversary callbacks; all mutations go through
// it so wire ownership can be enforced.
class AdversaryContext {
  public:
    AdversaryContext(QuantumMemory& mem, const PlayerSet& players, CounterRng rng)
        : mem_(mem), players_(players), rng_(rng) {}

    std::uint32_t p() const { return mem_.p(); }
    const PlayerSet& players() const { return players_; }
    CounterRng& rng() { return rng_; }

    void pauli(WireId w, Fe xc, Fe zc) {
        require_owned(w);
        mem_.apply_pauli(w, xc, zc, rng_);
    }

    // Replace the content of a cheater-held wire with a fresh basis state.
    void substitute_garbage(WireId w) {
        require_owned(w);
        WireId junk = mem_.alloc_zero(rng_);
        mem_.x(junk, rng_.field_element(p()), rng_);
        mem_.swap_wires(w, junk, rng_);
        mem_.discard(junk, rng_);
    }

    bool owns(WireId w) const { return players_.is_cheater(mem_.owner(w)); }

  private:
    void require_owned(WireId w) {
        if (!owns(w))
            throw ContractViolation("adversary touched a wire it does not own");
    }

    QuantumMemory& mem_;
    const PlayerSet& players_;
    CounterRng rng_;
};

// Dealing-time view for a cheating dealer or re-sharer: the words about to
// be distributed may be rewritten freely.  words[0] carries the secret, the
// rest are masking sharings.
struct DealView {
    std::vector<Codeword>* words = nullptr;
    std::uint32_t p = 0;
    int reshare_branch = -1;  // -1 when this is the dealer's top-level deal
};

struct AdversaryStrategy {
    std::string name = "none";

    // pick the corrupted set (static, before round 1)
    std::function<SupportSet(const PlayerSet&, CounterRng&)> choose_corrupt;

    // rewrite dealer-prepared classical words (cheating dealer only)
    std::function<void(DealView&, const PlayerSet&, CounterRng&)> on_deal;

    // act on dealer-prepared wires before distribution (cheating dealer only)
    std::function<void(AdversaryContext&, const std::vector<WireId>&)> on_deal_wires;

    // local operations on corrupted wires after a challenge round
    std::function<void(AdversaryContext&, const std::vector<WireId>&)> on_challenge;

    // override a broadcast value sent by a corrupted player
    std::function<Fe(std::size_t player, Fe honest_value, CounterRng&)> on_broadcast;

    // tamper with corrupted wires right before reconstruction
    std::function<void(AdversaryContext&, const std::vector<WireId>&)> on_reconstruct;

    // supply coin blocks for the turn-based coin source
    std::function<FeVec(std::size_t player, std::size_t count, std::uint32_t p, CounterRng&)>
        cheater_coins;
};

inline AdversaryStrategy honest_adversary() {
    AdversaryStrategy a;
    a.name = "none";
    return a;
}

// ----------------------------------------------------------------------------
// Public coins

enum class CoinMode { IdealVss, TurnBased };

struct CoinSource {
    CoinMode mode = CoinMode::IdealVss;

    // Draw `count` public field elements.  In the turn-based mode players
    // contribute blocks round-robin and corrupted players' blocks come from
    // the adversary; at least (n-t)/n of the coins stay honest-uniform.
    FeVec draw(std::size_t count, std::uint32_t p, const PlayerSet& players,
               const AdversaryStrategy& adv, CounterRng& rng, Transcript* tr,
               std::vector<bool>* honest_flags = nullptr) const {
        FeVec coins;
        coins.reserve(count);
        if (mode == CoinMode::IdealVss) {
            for (std::size_t i = 0; i < count; ++i) coins.push_back(rng.field_element(p));
            if (honest_flags) honest_flags->assign(count, true);
        } else {
            std::size_t player = 0;
            while (coins.size() < count) {
                std::size_t block = std::min<std::size_t>(1, count - coins.size());
                if (players.is_cheater(player) && adv.cheater_coins) {
                    FeVec supplied = adv.cheater_coins(player, block, p, rng);
                    for (std::size_t j = 0; j < block; ++j) {
                        coins.push_back(j < supplied.size() ? supplied[j] % p : 0);
                        if (honest_flags) honest_flags->push_back(false);
                    }
                } else {
                    for (std::size_t j = 0; j < block; ++j) {
                        coins.push_back(rng.field_element(p));
                        if (honest_flags) honest_flags->push_back(!players.is_cheater(player));
                    }
                }
                player = (player + 1) % players.n;
            }
        }
        if (tr) tr->coin(coins);
        return coins;
    }
};

}  // namespace qss

#endif
