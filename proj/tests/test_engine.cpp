#include <catch2/catch_amalgamated.hpp>

#include "qss/engine.hpp"
#include "qss/protocols/classical_vss.hpp"
#include "qss/stats.hpp"

using namespace qss;

TEST_CASE("player set validation and regimes") {
    CHECK_THROWS_AS(PlayerSet(5, 1, {0, 1}), Error);     // |C| > t
    CHECK_THROWS_AS(PlayerSet(5, 1, {7}), Error);        // out of range
    PlayerSet quarter(5, 1, {2});
    CHECK(quarter.satisfies(ThresholdRegime::QuarterN));
    CHECK_FALSE(quarter.satisfies(ThresholdRegime::SixthN));
    PlayerSet sixth(7, 1);
    CHECK(sixth.satisfies(ThresholdRegime::SixthN));
    CHECK_FALSE(sixth.satisfies(ThresholdRegime::EighthN));
    CHECK(PlayerSet(9, 1).satisfies(ThresholdRegime::EighthN));
}

TEST_CASE("accusation bookkeeping") {
    AccusationState acc(5);
    SECTION("clean rounds leave the state untouched") {
        std::vector<std::optional<DecodeOutcome>> outs(5);
        for (auto& o : outs) {
            o = DecodeOutcome{};
            o->status = DecodeStatus::Decoded;
        }
        update_accusations(acc, 1, outs);
        CHECK(acc.b_global.empty());
        for (const auto& b : acc.b_branch) CHECK(b.empty());
        CHECK_FALSE(acc.disqualified);
    }
    SECTION("branch errors accumulate monotonically and overflow into B") {
        std::vector<std::optional<DecodeOutcome>> outs(5);
        outs[2] = DecodeOutcome{};
        outs[2]->status = DecodeStatus::Decoded;
        outs[2]->error_support = {4};
        update_accusations(acc, 1, outs);
        CHECK(acc.b_branch[2] == SupportSet{4});
        // a second distinct accusation pushes |B_2| past t and fails the branch
        outs[2]->error_support = {0};
        update_accusations(acc, 1, outs);
        CHECK(acc.b_branch[2] == SupportSet{0, 4});
        CHECK(acc.b_global.count(2) == 1);
        CHECK_FALSE(acc.disqualified);
        // one more failed branch exceeds t and disqualifies the dealer
        outs[2] = std::nullopt;
        outs[3] = DecodeOutcome{};
        outs[3]->status = DecodeStatus::Detected;
        update_accusations(acc, 1, outs);
        CHECK(acc.disqualified);
    }
}

TEST_CASE("public coins") {
    PlayerSet honest(5, 1);
    AdversaryStrategy none = honest_adversary();
    SECTION("ideal coins are uniform") {
        CoinSource src{CoinMode::IdealVss};
        CounterRng rng(100);
        std::vector<std::uint64_t> counts(7, 0);
        for (int i = 0; i < 10000; ++i)
            counts[src.draw(1, 7, honest, none, rng, nullptr)[0]]++;
        CHECK(stats::chi2_uniform_pvalue(counts) > 0.01);
    }
    SECTION("turn-based coins without cheaters are all honest") {
        CoinSource src{CoinMode::TurnBased};
        CounterRng rng(101);
        std::vector<bool> flags;
        src.draw(20, 7, honest, none, rng, nullptr, &flags);
        for (bool f : flags) CHECK(f);
    }
    SECTION("turn-based coins with one cheater keep at least (n-t)/n honest") {
        CoinSource src{CoinMode::TurnBased};
        PlayerSet players(5, 1, {2});
        AdversaryStrategy adv = honest_adversary();
        adv.cheater_coins = [](std::size_t, std::size_t count, std::uint32_t,
                               CounterRng&) { return FeVec(count, 0); };
        CounterRng rng(102);
        std::vector<bool> flags;
        src.draw(25, 7, players, adv, rng, nullptr, &flags);
        std::size_t honest_count = 0;
        for (bool f : flags) honest_count += f;
        CHECK(honest_count * 5 >= flags.size() * 4);  // >= k(n-t)/n
    }
}

TEST_CASE("adversary wire ownership is enforced") {
    CounterRng rng(103);
    QuantumMemory mem(BackendKind::Stabilizer, 5);
    PlayerSet players(5, 1, {1});
    WireId honest_wire = mem.alloc_zero(rng, 0);
    WireId cheater_wire = mem.alloc_zero(rng, 1);
    AdversaryContext ctx(mem, players, rng.derive(1));
    CHECK_NOTHROW(ctx.pauli(cheater_wire, 1, 0));
    CHECK_THROWS_AS(ctx.pauli(honest_wire, 1, 0), ContractViolation);
    CHECK_THROWS_AS(ctx.substitute_garbage(honest_wire), ContractViolation);
}

TEST_CASE("transcripts replay byte-identically") {
    ClassicalVssParams params{FieldParams(7, 5), 1, 3};
    PlayerSet players(5, 1, {2});
    AdversaryStrategy adv = broadcast_liar();
    auto r1 = run_classical_vss(params, 4, players, adv, 999);
    auto r2 = run_classical_vss(params, 4, players, adv, 999);
    auto r3 = run_classical_vss(params, 4, players, adv, 1000);
    CHECK(r1.transcript.to_jsonl() == r2.transcript.to_jsonl());
    CHECK(r1.transcript.to_jsonl() != r3.transcript.to_jsonl());
    CHECK(!r1.transcript.to_jsonl().empty());
}

TEST_CASE("identity adversary leaves the transcript identical to the honest run") {
    ClassicalVssParams params{FieldParams(7, 5), 1, 3};
    PlayerSet honest(5, 1);
    PlayerSet with_idle_cheater(5, 1, {3});
    auto r1 = run_classical_vss(params, 2, honest, honest_adversary(), 77);
    auto r2 = run_classical_vss(params, 2, with_idle_cheater, honest_adversary(), 77);
    CHECK(r1.transcript.to_jsonl() == r2.transcript.to_jsonl());
}
