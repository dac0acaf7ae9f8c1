// Command-line front end: codec utilities, single protocol runs, Monte Carlo
// soundness sweeps, backend cross-validation and report rendering.
//
//   qss codec share  --n 5 --delta 2 --p 7 --secret 3
//   qss codec decode --n 5 --delta 2 --p 7 --word 6,6,3,5,2
//   qss run   --protocol vqss --n 5 --t 1 --p 7 --k 10 --adversary none --seed 1
//   qss sweep --protocol classical-vss --adversary guess-ahead --k 1 --trials 10000
//   qss xval  --circuits 100 --shots 100000
//   qss report --in report.json
//
// Flags may also come from a key=value config file via --config; command-line
// values override the file.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qss/experiment.hpp"

namespace {

using namespace qss;

FeVec parse_csv(const std::string& s) {
    FeVec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(Fe(std::stoul(tok)));
    return out;
}

std::vector<std::uint32_t> parse_csv_u32(const std::string& s) {
    std::vector<std::uint32_t> out;
    for (Fe v : parse_csv(s)) out.push_back(v);
    return out;
}

// no partial output files: write to a sibling temp path, then rename
void write_atomically(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw Error("cannot open output file '" + path + "'");
        f << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot move output into place at '" + path + "'");
}

std::string set_to_csv(const SupportSet& s) {
    std::string out;
    for (auto v : s) {
        if (!out.empty()) out += ',';
        out += std::to_string(v + 1);  // players are reported 1-based
    }
    return out.empty() ? "-" : out;
}

int cmd_codec(const std::string& mode, std::uint32_t n, std::uint32_t delta,
              std::uint32_t p, Fe secret, const std::string& word_csv,
              const std::string& erasure_csv, std::uint64_t seed) {
    RsCode code(FieldParams(p, n), delta);
    nlohmann::json j;
    if (mode == "share") {
        CounterRng rng(seed, 0);
        auto [word, poly] = rs_share(code, secret % p, rng);
        j["word"] = word;
        j["poly"] = poly.coeffs;
    } else if (mode == "decode") {
        Codeword word = parse_csv(word_csv);
        if (word.size() != n) throw Error("word length must equal n");
        std::set<std::size_t> erasures;
        if (!erasure_csv.empty())
            for (Fe v : parse_csv(erasure_csv)) erasures.insert(v - 1);  // 1-based in
        DecodeOutcome out = rs_decode(code, word, erasures);
        if (out.status == DecodeStatus::Decoded) {
            j["status"] = "decoded";
            j["secret"] = out.secret;
            j["codeword"] = out.codeword;
            std::vector<std::size_t> errs;
            for (auto e : out.error_support) errs.push_back(e + 1);
            j["error_positions"] = errs;
        } else {
            j["status"] = "detected";
        }
    } else if (mode == "syndrome") {
        Codeword word = parse_csv(word_csv);
        if (word.size() != n) throw Error("word length must equal n");
        j["syndrome"] = rs_syndrome(code, word);
        j["in_code"] = rs_detect(code, word);
    } else {
        throw Error("codec mode must be share, decode or syndrome");
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale verifiable quantum secret sharing toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override");

    qss::ExperimentConfig cfg;
    Fe secret = 0;
    std::string word_csv, erasure_csv, codec_mode = "decode";
    std::uint32_t delta = 2;
    std::string circuit_path, transcript_path, out_path, in_path, k_csv, primes_csv = "3,5";
    std::size_t circuits = 100, max_gates = 30;
    std::uint32_t max_qupits = 4;
    std::uint64_t shots = 100000;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "number of players / code length");
        sub->add_option("--t", cfg.t, "corruption bound");
        sub->add_option("--p", cfg.p, "prime field modulus");
        sub->add_option("--k", cfg.k, "security parameter (challenges)");
        sub->add_option("--seed", cfg.seed, "run seed");
        sub->add_option("--backend", cfg.backend, "stabilizer | statevector | share");
        sub->add_option("--adversary", cfg.adversary, "canned adversary name");
    };

    CLI::App* codec = app.add_subcommand("codec", "classical code utilities");
    codec->add_option("mode", codec_mode, "share | decode | syndrome")->required();
    codec->add_option("--n", cfg.n);
    codec->add_option("--delta", delta, "degree bound");
    codec->add_option("--p", cfg.p);
    codec->add_option("--secret", secret);
    codec->add_option("--word", word_csv, "comma-separated word");
    codec->add_option("--erasures", erasure_csv, "1-based erased positions");
    codec->add_option("--seed", cfg.seed);

    CLI::App* run = app.add_subcommand("run", "one protocol run");
    add_common(run);
    run->add_option("--protocol", cfg.protocol,
                    "code-check | dual-code-check | classical-vss | vqss | top-share | mpqc");
    run->add_option("--secret", secret, "dealer secret (basis value)");
    run->add_option("--circuit", circuit_path, "circuit file for mpqc");
    run->add_option("--transcript", transcript_path, "write the transcript (JSON lines)");

    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo soundness sweep");
    add_common(sweep);
    sweep->add_option("--protocol", cfg.protocol);
    sweep->add_option("--trials", cfg.trials);
    sweep->add_option("--sweep-k", k_csv, "comma-separated k axis");
    sweep->add_option("--out", out_path, "report JSON path");

    CLI::App* q2c = app.add_subcommand("q2c", "measure-early vs measure-late equivalence");
    add_common(q2c);
    q2c->add_option("--trials", cfg.trials);
    q2c->add_option("--out", out_path);

    CLI::App* xval = app.add_subcommand("xval", "backend cross-validation corpus");
    xval->add_option("--circuits", circuits);
    xval->add_option("--max-gates", max_gates);
    xval->add_option("--max-qupits", max_qupits);
    xval->add_option("--p", primes_csv, "comma-separated primes");
    xval->add_option("--shots", shots);
    xval->add_option("--seed", cfg.seed);
    xval->add_option("--out", out_path);

    CLI::App* report = app.add_subcommand("report", "render a report JSON as text");
    report->add_option("--in", in_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (codec->parsed())
            return cmd_codec(codec_mode, cfg.n, delta, cfg.p, secret, word_csv, erasure_csv,
                             cfg.seed);
        if (run->parsed()) {
            cfg.validate();
            std::optional<qss::Circuit> circuit;
            if (!circuit_path.empty()) {
                std::ifstream f(circuit_path);
                if (!f) throw qss::Error("cannot read circuit file");
                circuit = qss::circuit_from_text(f);
            }
            auto out = qss::run_protocol_once(cfg, secret % cfg.p,
                                              circuit ? &*circuit : nullptr);
            std::cout << (out.accepted ? "accepted" : "rejected") << "  B={"
                      << set_to_csv(out.b) << "}\n";
            for (std::size_t i = 0; i < out.b_branch.size(); ++i)
                if (!out.b_branch[i].empty())
                    std::cout << "  B_" << (i + 1) << " = {" << set_to_csv(out.b_branch[i])
                              << "}\n";
            if (!out.detail.is_null()) std::cout << out.detail.dump(2) << "\n";
            if (!transcript_path.empty()) {
                write_atomically(transcript_path, out.transcript.to_jsonl());
                std::cout << "transcript: " << transcript_path << "\n";
            }
            return 0;
        }
        if (sweep->parsed()) {
            cfg.validate();
            if (!k_csv.empty()) cfg.k_values = parse_csv_u32(k_csv);
            auto rep = qss::soundness_sweep(cfg);
            std::cout << rep.render_text();
            if (!out_path.empty()) write_atomically(out_path, rep.to_json().dump(2));
            return 0;
        }
        if (q2c->parsed()) {
            cfg.validate();
            auto rep = qss::q2c_experiment(cfg);
            std::cout << rep.render_text();
            if (!out_path.empty()) write_atomically(out_path, rep.to_json().dump(2));
            bool pass = rep.extra["equivalence_pass"].get<bool>();
            return pass ? 0 : 1;
        }
        if (xval->parsed()) {
            auto rep = qss::xval_experiment(circuits, max_gates, max_qupits,
                                            parse_csv_u32(primes_csv), shots, cfg.seed);
            std::cout << rep.render_text();
            if (!out_path.empty()) write_atomically(out_path, rep.to_json().dump(2));
            return rep.extra["all_pass"].get<bool>() ? 0 : 1;
        }
        if (report->parsed()) {
            std::ifstream f(in_path);
            if (!f) throw qss::Error("cannot read report '" + in_path + "'");
            nlohmann::json j = nlohmann::json::parse(f);
            qss::Report rep;
            rep.experiment = j.value("experiment", "?");
            if (j.contains("cells"))
                for (const auto& cj : j["cells"]) {
                    qss::SweepCell c;
                    c.k = cj.value("k", 0u);
                    c.trials = cj.value("trials", 0ull);
                    c.accepted = cj.value("accepted", 0ull);
                    c.bad_accepts = cj.value("bad_accepts", 0ull);
                    c.bad_ci.lo = cj.value("wilson_lo", 0.0);
                    c.bad_ci.hi = cj.value("wilson_hi", 1.0);
                    c.bound = cj.value("bound", 0.0);
                    c.violation = cj.value("violation", false);
                    rep.cells.push_back(c);
                }
            if (j.contains("extra")) rep.extra = j["extra"];
            std::cout << rep.render_text();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
