// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qdsim/runner.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

using namespace qdsim;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the command line tool through the shell, capturing stdout.
Run run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" QDSIM_CLI_PATH "\" " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.out.append(buf, got);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("qdsim_test_runner_" + std::to_string(getpid()));
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

RunConfig small(Encoding e) {
    ConfigOverrides f;
    f.encoding = to_string(e);
    f.n = 6;
    f.delta1 = 4;
    f.decoys = 3;
    f.trials = 3;
    f.seed = 7;
    return build_run_config(std::nullopt, f, nullptr);
}

}  // namespace

TEST(runner, defaults_and_matching_noise) {
    const auto cfg = build_run_config(std::nullopt, {}, nullptr);
    ASSERT_EQ(cfg.protocol.encoding, Encoding::dp);
    ASSERT_EQ(cfg.protocol.noise.kind, NoiseKind::dephasing);
    ASSERT_EQ(cfg.attack.kind, AttackKind::none);
    ConfigOverrides f;
    f.encoding = "r";
    ASSERT_EQ(build_run_config(std::nullopt, f, nullptr).protocol.noise.kind, NoiseKind::rotation);
    f.noise = "dephasing";
    ASSERT_EQ(build_run_config(std::nullopt, f, nullptr).protocol.noise.kind, NoiseKind::dephasing);
}

TEST(runner, flags_override_file_and_seed_falls_back_to_env) {
    ConfigOverrides file;
    file.n = 10;
    file.seed = 5;
    file.theta_key = 0.1;
    ConfigOverrides flags;
    flags.n = 20;
    auto cfg = build_run_config(file, flags, "99");
    ASSERT_EQ(cfg.protocol.n, 20u);
    ASSERT_EQ(cfg.protocol.seed, 5u);
    ASSERT_EQ(cfg.protocol.theta_key, 0.1);

    file.seed.reset();
    ASSERT_EQ(build_run_config(file, flags, "99").protocol.seed, 99u);
    flags.seed = 3;
    ASSERT_EQ(build_run_config(file, flags, "99").protocol.seed, 3u);
    ASSERT_THROW(build_run_config(file, {}, "abc"), ConfigError);
}

TEST(runner, config_document_parsing) {
    const auto o = overrides_from_json(Json::parse(R"({"encoding": "r", "n": 12, "theta_key": 0.2,
        "noise_law": "fixed:0.5", "attack": "capture_sc", "introspect": true})"));
    ASSERT_EQ(o.encoding, "r");
    ASSERT_EQ(o.n, 12u);
    ASSERT_EQ(o.theta_key, 0.2);
    ASSERT_EQ(o.introspect, true);
    ASSERT_THROW(overrides_from_json(Json::parse(R"({"bogus": 1})")), ConfigError);
    ASSERT_THROW(overrides_from_json(Json::parse(R"({"n": "ten"})")), ConfigError);
    ASSERT_THROW(overrides_from_json(Json::parse(R"({"n": -1})")), ConfigError);
    ASSERT_THROW(overrides_from_json(Json::parse("[1]")), ConfigError);
}

TEST(runner, invalid_settings) {
    ConfigOverrides f;
    f.theta_key = std::numbers::pi / 4;
    ASSERT_THROW(build_run_config(std::nullopt, f, nullptr), ConfigError);
    f = {};
    f.attack = "teleport";
    ASSERT_THROW(build_run_config(std::nullopt, f, nullptr), ConfigError);
    f = {};
    f.trials = 0;
    ASSERT_THROW(build_run_config(std::nullopt, f, nullptr), ConfigError);
    f = {};
    f.ancilla_control = 2;
    ASSERT_THROW(build_run_config(std::nullopt, f, nullptr), ConfigError);
    f = {};
    f.noise_law = "fixed:x";
    ASSERT_THROW(build_run_config(std::nullopt, f, nullptr), ConfigError);
}

TEST(runner, dialogue_document) {
    for (auto e : {Encoding::dp, Encoding::r}) {
        auto cfg = small(e);
        const auto doc = dialogue_document(cfg);
        ASSERT_EQ(doc["format"], "qdsim-dialogue/1");
        ASSERT_EQ(doc["summary"]["aborts"], 0);
        ASSERT_EQ(doc["summary"]["decode_errors"], 0);
        ASSERT_EQ(doc["summary"]["key_shares"], 1);
        ASSERT_EQ(doc["rounds"].size(), 3u);
        ASSERT_EQ(doc.dump(), dialogue_document(cfg).dump());
        cfg.introspect = true;
        const auto intro = dialogue_document(cfg);
        ASSERT_LT(intro["rounds"][0]["mixedness_max_deviation"].get<double>(), kIdentityTol);
        ASSERT_EQ(intro["rounds"][0]["transcript"]["format"], "qdsim-transcript/1");
        const auto csv = dialogue_csv(doc);
        ASSERT_EQ(csv.rfind("# qdsim-dialogue-csv/1\n", 0), 0u);
    }
}

TEST(runner, attack_document) {
    auto cfg = small(Encoding::dp);
    cfg.attack.kind = AttackKind::intercept_resend_logical;
    cfg.trials = 20;
    const auto doc = attack_document(cfg);
    ASSERT_EQ(doc["format"], "qdsim-attack/1");
    ASSERT_EQ(doc["stats"]["trials"], 20);
    ASSERT_NEAR(doc["stats"]["analytic_rate"].get<double>(), 1 - std::pow(0.75, 3), 1e-12);
    ASSERT_EQ(doc["per_trial"].size(), 20u);
    ASSERT_EQ(attack_csv(doc).rfind("# qdsim-attack-csv/1\n", 0), 0u);
}

TEST(runner, verify_and_report_documents) {
    const auto v = verify_document(small(Encoding::r));
    ASSERT_TRUE(v["passed"].get<bool>());
    const auto rep = report_document(small(Encoding::dp));
    ASSERT_EQ(rep["efficiency"][0]["eta_fraction"], "2/3");
    ASSERT_NEAR(rep["leakage"]["max_leakage_bits"].get<double>(), 0, 1e-12);
    auto cf = small(Encoding::dp);
    cf.counterfactual_public_m = true;
    ASSERT_NEAR(report_document(cf)["leakage"]["max_leakage_bits"].get<double>(), 1, 1e-12);
    ASSERT_EQ(report_csv(rep).rfind("# qdsim-report-csv/1\n", 0), 0u);
    ASSERT_EQ(verify_csv(v).rfind("# qdsim-verify-csv/1\n", 0), 0u);
}

TEST(runner, run_command_exit_codes) {
    std::ostringstream out;
    std::ostringstream log;
    ASSERT_EQ(run_command(Command::verify, small(Encoding::dp), out, log), kExitOk);
    auto cfg = small(Encoding::dp);
    cfg.out_path = "/nonexistent-dir/qdsim/out.json";
    ASSERT_EQ(run_command(Command::dialogue, cfg, out, log), kExitIoError);
    cfg = small(Encoding::dp);
    cfg.transcript_path = scratch("missing.json").string();
    ASSERT_EQ(run_command(Command::report, cfg, out, log), kExitIoError);
    const auto bad = scratch("bad_transcript.json");
    write_file(bad, R"({"format": "qdsim-verify/1"})");
    cfg.transcript_path = bad.string();
    ASSERT_EQ(run_command(Command::report, cfg, out, log), kExitConfigError);
}

TEST(cli, subcommands_succeed) {
    for (const char* sub : {"dialogue", "attack", "verify", "report"}) {
        const auto r = run_cli(std::string(sub) + " --n 4 --delta1 4 --decoys 2 --trials 3 --seed 1");
        ASSERT_EQ(r.code, 0) << sub;
        ASSERT_TRUE(Json::parse(r.out).contains("format")) << sub;
    }
}

TEST(cli, same_seed_same_bytes) {
    const std::string args = "attack --encoding r --attack intercept_resend_physical --n 4 --decoys 2 --trials 5";
    const auto a = run_cli(args + " --seed 4");
    const auto b = run_cli(args + " --seed 4");
    const auto c = run_cli(args + " --seed 5");
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(a.out, b.out);
    ASSERT_NE(a.out, c.out);
    ASSERT_EQ(run_cli(args, "QDSIM_SEED=4").out, a.out);
}

TEST(cli, config_file_and_flag_layering) {
    const auto cfg = scratch("config.json");
    write_file(cfg, R"({"encoding": "r", "n": 5, "delta1": 4, "decoys": 2, "trials": 2, "seed": 11})");
    const auto a = run_cli("dialogue --config " + cfg.string());
    ASSERT_EQ(a.code, 0);
    const auto doc = Json::parse(a.out);
    ASSERT_EQ(doc["config"]["encoding"], "r");
    ASSERT_EQ(doc["config"]["n"], 5);
    const auto b = Json::parse(run_cli("dialogue --config " + cfg.string() + " --n 7").out);
    ASSERT_EQ(b["config"]["n"], 7);
    ASSERT_EQ(b["config"]["seed"], 11);
}

TEST(cli, exit_codes) {
    ASSERT_EQ(run_cli("").code, 1);
    ASSERT_EQ(run_cli("dialogue --encoding xyz").code, 1);
    ASSERT_EQ(run_cli("dialogue --theta-key 0.7853981633974483").code, 1);
    ASSERT_EQ(run_cli("dialogue --n 4", "QDSIM_SEED=-3").code, 1);
    ASSERT_EQ(run_cli("dialogue --config /nonexistent/qdsim.json").code, 3);
    const auto bad = scratch("bad.json");
    write_file(bad, "{ not json");
    ASSERT_EQ(run_cli("dialogue --config " + bad.string()).code, 1);
    ASSERT_EQ(run_cli("dialogue --n 4 --out /nonexistent-dir/x.json").code, 3);
}

TEST(cli, out_file_and_csv) {
    const auto out = scratch("verify.csv");
    const auto r = run_cli("verify --format csv --out " + out.string());
    ASSERT_EQ(r.code, 0);
    ASSERT_TRUE(r.out.empty());
    std::ifstream in(out);
    std::string first;
    std::getline(in, first);
    ASSERT_EQ(first, "# qdsim-verify-csv/1");
}

TEST(cli, report_reads_introspected_dialogue) {
    const auto path = scratch("dialogue.json");
    ASSERT_EQ(run_cli("dialogue --n 6 --delta1 4 --decoys 2 --trials 2 --introspect --out " + path.string()).code, 0);
    const auto r = run_cli("report --transcript " + path.string());
    ASSERT_EQ(r.code, 0);
    const auto doc = Json::parse(r.out);
    ASSERT_EQ(doc["leakage"]["source"], "file");
    ASSERT_EQ(doc["leakage"]["qubits"], 12);
    ASSERT_NEAR(doc["leakage"]["entropy_bits"].get<double>(), 24, 1e-9);
}
