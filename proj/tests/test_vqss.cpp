#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "qss/protocols/adversaries.hpp"
#include "qss/protocols/vqss.hpp"
#include "qss/stats.hpp"

using namespace qss;

namespace {

VqssParams params_n5(std::uint32_t k) {
    VqssParams v;
    v.field = FieldParams(7, 5);
    v.t = 1;
    v.k = k;
    return v;
}

// Exact check that a reconstructed wire equals the requested input state.
bool output_matches(QuantumMemory& mem, WireId out, const ShareRequest& req) {
    if (req.fourier_input || req.claim == KnownState::Plus)
        return mem.wire_has_stabilizer(out, 1, 0, 0);  // X-stabilized: F|0>
    return mem.wire_is_basis_state(out, req.basis_value);
}

}  // namespace

TEST_CASE("honest sharing verifies and reconstructs the exact input") {
    for (const ShareRequest& req :
         {ShareRequest::basis(0), ShareRequest::basis(1), ShareRequest::fourier_zero()}) {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            auto run = vqss_share_and_verify(params_n5(3), req, PlayerSet(5, 1),
                                             honest_adversary(), seed);
            REQUIRE(run.passed);
            CHECK(run.acc.b_global.empty());
            auto out = vqss_reconstruct(run, 0, 2, honest_adversary());
            REQUIRE(out);
            CHECK(output_matches(*run.mem, *out, req));
        }
    }
}

TEST_CASE("verification acts as the identity on honest trees") {
    // with no cheaters the data tree must still pass every local membership
    // check and reconstruct exactly, for a basis and a rotated input
    auto run = vqss_share_and_verify(params_n5(2), ShareRequest::basis(3), PlayerSet(5, 1),
                                     honest_adversary(), 42);
    REQUIRE(run.passed);
    // every branch is a clean encoding: its full quantum syndrome is zero
    CounterRng chk(1);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(in_code_span(*run.mem, run.data[0].w[i], run.code.v_code(), {}, false, chk));
        CHECK(in_code_span(*run.mem, run.data[0].w[i], run.code.w_code(), {}, true, chk));
    }
}

TEST_CASE("pauli injection on corrupted wires never blames honest players") {
    PlayerSet players(5, 1, {3});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto run = vqss_share_and_verify(params_n5(2), ShareRequest::basis(5), players,
                                         pauli_injector(), seed);
        REQUIRE(run.passed);  // honest dealer always passes
        for (auto b : run.acc.b_global) CHECK(players.is_cheater(b));
        for (std::size_t i = 0; i < 5; ++i) {
            if (players.is_cheater(i)) continue;
            for (auto accused : run.acc.b_branch[i]) CHECK(players.is_cheater(accused));
        }
        auto out = vqss_reconstruct(run, 0, 1, pauli_injector());
        REQUIRE(out);
        CHECK(run.mem->wire_is_basis_state(*out, 5));
    }
}

TEST_CASE("reconstruction is invariant under corrupted-share tampering") {
    PlayerSet players(5, 1, {2});
    for (auto adv : {reconstruction_pauli(), reconstruction_garbage()}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            auto run = vqss_share_and_verify(params_n5(2), ShareRequest::basis(4), players,
                                             honest_adversary(), seed);
            REQUIRE(run.passed);
            auto out = vqss_reconstruct(run, 0, 0, adv);
            REQUIRE(out);
            CHECK(run.mem->wire_is_basis_state(*out, 4));
        }
    }
}

TEST_CASE("a branch corrupted beyond any candidate set joins B and recovery proceeds") {
    auto run = vqss_share_and_verify(params_n5(2), ShareRequest::basis(6), PlayerSet(5, 1),
                                     honest_adversary(), 9);
    REQUIRE(run.passed);
    // harness-level corruption: an error pattern whose syndrome no
    // single-position correction can explain
    RsCode v = run.code.v_code();
    auto single_syndromes = [&] {
        std::vector<ClassicalSyndrome> out;
        for (std::size_t pos = 0; pos < 5; ++pos)
            for (Fe val = 1; val < 7; ++val) {
                Codeword e(5, 0);
                e[pos] = val;
                out.push_back(rs_syndrome(v, e));
            }
        return out;
    }();
    Codeword err(5, 0);
    bool found = false;
    for (Fe a = 1; a < 7 && !found; ++a)
        for (Fe b = 1; b < 7 && !found; ++b) {
            Codeword e(5, 0);
            e[0] = a;
            e[3] = b;
            auto s = rs_syndrome(v, e);
            bool aliased = false;
            for (const auto& ss : single_syndromes) aliased |= (ss == s);
            if (!aliased) {
                err = e;
                found = true;
            }
        }
    REQUIRE(found);
    CounterRng wreck(99);
    for (std::size_t j = 0; j < 5; ++j)
        if (err[j]) run.mem->apply_pauli(run.data[0].w[1][j], err[j], 0, wreck);
    auto out = vqss_reconstruct(run, 0, 0, honest_adversary());
    REQUIRE(out);
    CHECK(run.mem->wire_is_basis_state(*out, 6));
}

TEST_CASE("an inconsistent dealer is localized by verification") {
    PlayerSet players(5, 1, {0});
    std::size_t caught = 0, passed_clean = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        auto run = vqss_share_and_verify(params_n5(3), ShareRequest::basis(2), players,
                                         inconsistent_dealer(), seed);
        if (!run.passed) {
            ++caught;
            continue;
        }
        // surviving trees must still reconstruct a definite value: the
        // deviation is confined to accused positions or the dealer's wires
        auto out = vqss_reconstruct(run, 0, 1, honest_adversary());
        REQUIRE(out);
        Fe val = run.mem->measure(*out, run.rng);
        (void)val;
        ++passed_clean;
    }
    CHECK(caught + passed_clean == 12);
}

TEST_CASE("claiming zero while sharing one is rejected at the stated rate") {
    PlayerSet players(5, 1, {0});
    // the "dealer" shares basis 1 but runs the zero-claim recipe; k=1 lets it
    // slip through only when the single coin is zero
    std::uint64_t slipped = 0;
    const std::uint64_t trials = 600;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        ShareRequest req;
        req.claim = KnownState::Zero;
        req.basis_value = 1;  // mismatch with the claim
        auto run = vqss_share_and_verify(params_n5(1), req, players, honest_adversary(),
                                         seed);
        if (run.passed) ++slipped;
    }
    auto ci = stats::wilson(slipped, trials);
    CHECK(ci.lo < 1.0 / 7);
    CHECK(ci.hi > 1.0 / 7);

    // with many challenges it never slips through
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        ShareRequest req;
        req.claim = KnownState::Zero;
        req.basis_value = 1;
        auto run = vqss_share_and_verify(params_n5(12), req, players, honest_adversary(),
                                         seed);
        CHECK_FALSE(run.passed);
    }
}

TEST_CASE("honest known-state sharings pass their extended checks") {
    for (auto req : {ShareRequest::proven_zero(), ShareRequest::proven_plus()}) {
        auto run = vqss_share_and_verify(params_n5(3), req, PlayerSet(5, 1),
                                         honest_adversary(), 12);
        CHECK(run.passed);
        auto out = vqss_reconstruct(run, 0, 2, honest_adversary());
        REQUIRE(out);
        CHECK(output_matches(*run.mem, *out, req));
    }
}

TEST_CASE("batched verification certifies several trees with linear ancillas") {
    std::vector<ShareRequest> reqs{ShareRequest::basis(2), ShareRequest::basis(6),
                                   ShareRequest::fourier_zero()};
    auto run = batched_share_and_verify(params_n5(3), reqs, PlayerSet(5, 1),
                                        honest_adversary(), 5);
    REQUIRE(run.passed);
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        auto out = vqss_reconstruct(run, i, 3, honest_adversary());
        REQUIRE(out);
        CHECK(output_matches(*run.mem, *out, reqs[i]));
    }
}

TEST_CASE("one bad tree in a batch is caught at the single-tree rate") {
    PlayerSet players(5, 1, {0});
    std::uint64_t slipped = 0;
    const std::uint64_t trials = 400;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        std::vector<ShareRequest> reqs{ShareRequest::proven_zero(),
                                       ShareRequest::proven_zero(),
                                       ShareRequest::proven_zero()};
        reqs[1].basis_value = 1;  // the middle tree lies about its claim
        auto run = batched_share_and_verify(params_n5(1), reqs, players,
                                            honest_adversary(), seed);
        if (run.passed) ++slipped;
    }
    // single-tree soundness oracle: the zero-claim check at k=1 slips with
    // probability 1/p (the one challenge coefficient hitting zero)
    auto ci = stats::wilson(slipped, trials);
    CHECK(ci.lo < 1.0 / 7);
    CHECK(ci.hi > 1.0 / 7);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::vector<ShareRequest> reqs{ShareRequest::proven_zero(),
                                       ShareRequest::proven_zero(),
                                       ShareRequest::proven_zero()};
        reqs[1].basis_value = 1;
        auto run = batched_share_and_verify(params_n5(10), reqs, players,
                                            honest_adversary(), seed);
        CHECK_FALSE(run.passed);
    }
}

TEST_CASE("measuring the data tree yields consistent two-level words in both bases") {
    // statistical version of the soundness statement on passing honest runs
    RsCode v(FieldParams(7, 5), 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        // computational-basis sample
        auto run = vqss_share_and_verify(params_n5(2), ShareRequest::basis(3),
                                         PlayerSet(5, 1), honest_adversary(), seed);
        REQUIRE(run.passed);
        ShareTree tree(5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                tree.at(i, j) = run.mem->measure(run.data[0].w[i][j], run.rng);
        Fe secret = 99;
        CHECK(two_good(tree, v, run.acc, run.players.cheaters, &secret));
        CHECK(secret == 3);

        // Fourier-basis sample on an independent run
        auto run2 = vqss_share_and_verify(params_n5(2), ShareRequest::basis(3),
                                          PlayerSet(5, 1), honest_adversary(), 1000 + seed);
        REQUIRE(run2.passed);
        ShareTree ftree(5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) {
                run2.mem->fourier(run2.data[0].w[i][j], 1, run2.rng);
                ftree.at(i, j) = run2.mem->measure(run2.data[0].w[i][j], run2.rng);
            }
        CHECK(two_good(ftree, run2.code.w_code(), run2.acc, run2.players.cheaters));
    }
}

TEST_CASE("measuring before or after the verification has the same distribution") {
    // quantum-to-classical reduction at the two-level protocol: the marginal
    // of a fixed honest leaf measured after verification matches a fresh
    // encoding's marginal
    std::map<Fe, std::uint64_t> post, fresh;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        auto run = vqss_share_and_verify(params_n5(1), ShareRequest::basis(2),
                                         PlayerSet(5, 1), honest_adversary(), seed);
        REQUIRE(run.passed);
        post[run.mem->measure(run.data[0].w[2][3], run.rng)]++;

        CounterRng rng(5000 + seed, 0);
        QuantumMemory mem(BackendKind::Stabilizer, 7);
        CssCode code(FieldParams(7, 5), 2);
        WireId in = mem.alloc_zero(rng);
        mem.x(in, 2, rng);
        auto level1 = encode_state(mem, code, in, rng);
        auto branch = encode_state(mem, code, level1[2], rng);
        fresh[mem.measure(branch[3], rng)]++;
    }
    CHECK(stats::chi2_two_sample_pvalue(post, fresh) > 0.01);
}

TEST_CASE("batched verification uses linearly many ancilla trees") {
    // the literal schedule deals (k+1)^2 systems to certify one tree; the
    // batched schedule deals l data trees plus 2k ancillas
    VqssParams params = params_n5(4);
    auto literal = vqss_share_and_verify(params, ShareRequest::basis(1), PlayerSet(5, 1),
                                         honest_adversary(), 3);
    std::vector<ShareRequest> reqs{ShareRequest::basis(1), ShareRequest::basis(2),
                                   ShareRequest::basis(3)};
    auto batched = batched_share_and_verify(params, reqs, PlayerSet(5, 1),
                                            honest_adversary(), 3);
    REQUIRE(literal.passed);
    REQUIRE(batched.passed);
    // count dealt trees via allocated wires: every tree is n^2 leaves plus n
    // level-1 carriers
    const std::size_t per_tree = 25 + 5;
    std::size_t literal_trees = (4 + 1) * (4 + 1);      // (k+1)^2 for one sharing
    std::size_t batched_trees = reqs.size() + 2 * 4;    // l + 2k for three
    CHECK(literal_trees * per_tree > batched_trees * per_tree * 2);
    CHECK(batched.data.size() == reqs.size());
}
