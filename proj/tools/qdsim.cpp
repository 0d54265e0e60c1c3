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


// qdsim: batch experiment runner for the decoherence-free quantum dialogue
// protocols. See README.md for the subcommands and the config schema.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "qdsim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Decoherence-free quantum dialogue simulator"};
    app.require_subcommand(1);

    qdsim::ConfigOverrides flags;
    std::optional<std::string> config_path;
    bool introspect = false;
    bool no_encrypt = false;
    bool counterfactual = false;

    auto* dialogue = app.add_subcommand("dialogue", "Key sharing then repeated dialogue rounds on one key");
    auto* attack = app.add_subcommand("attack", "Detection statistics for an eavesdropping strategy");
    auto* verify = app.add_subcommand("verify", "Algebraic identity and invariance suites");
    auto* report = app.add_subcommand("report", "Efficiency and information-leakage reports");
    for (auto* sub : {dialogue, attack, verify, report}) {
        sub->fallthrough();
    }

    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--encoding", flags.encoding, "Logical code")->check(CLI::IsMember({"dp", "r"}));
    app.add_option("--n", flags.n, "Message length in bits");
    app.add_option("--delta1", flags.delta1, "Resource states used by the key-sharing sampling check");
    app.add_option("--decoys", flags.decoys, "Decoy logical qubits per transmitted block");
    app.add_option("--theta-key", flags.theta_key, "Key-refresh rotation angle (radians)");
    app.add_option("--noise", flags.noise, "Collective channel (default: the encoding's own)")
        ->check(CLI::IsMember({"dephasing", "rotation", "ideal"}));
    app.add_option("--noise-law", flags.noise_law, "uniform | fixed:<rad> | list:<rad>,<rad>,...");
    app.add_option("--attack", flags.attack,
                   "none | intercept_resend_logical | intercept_resend_physical | capture_sc | entangle_ancilla");
    app.add_option("--attack-direction", flags.attack_direction, "key_flight | forward | return | both");
    app.add_option("--substitution", flags.substitution, "capture_sc policy: random_logical | entangled | block");
    app.add_option("--ancilla-scope", flags.ancilla_scope, "entangle_ancilla scope: all | ciphertext_only");
    app.add_option("--ancilla-control", flags.ancilla_control, "entangle_ancilla control carrier: 0 (C1) or 1 (C2)");
    app.add_option("--trials", flags.trials, "Rounds (dialogue) or independent runs (attack)");
    app.add_option("--seed", flags.seed, "Master seed (falls back to QDSIM_SEED)");
    app.add_option("--format,--report", flags.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", flags.out, "Output file (default: stdout)");
    app.add_option("--transcript", flags.transcript, "report: transcript or introspected dialogue document");
    app.add_flag("--introspect", introspect, "Record transcripts and ciphertext mixedness");
    app.add_flag("--no-encrypt", no_encrypt, "Control runs: send message qubits unencrypted");
    app.add_flag("--counterfactual-public-m", counterfactual,
                 "report: disclose the initial logical bits in the synthesized transcript");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qdsim::kExitConfigError;
    }
    if (introspect) flags.introspect = true;
    if (no_encrypt) flags.encrypt = false;
    if (counterfactual) flags.counterfactual_public_m = true;

    qdsim::RunConfig cfg;
    try {
        std::optional<qdsim::ConfigOverrides> file;
        if (config_path) {
            file = qdsim::overrides_from_json(qdsim::read_json_file(*config_path));
        }
        cfg = qdsim::build_run_config(file, flags, std::getenv("QDSIM_SEED"));
    } catch (const qdsim::IoError& e) {
        std::cerr << "qdsim: I/O error: " << e.what() << "\n";
        return qdsim::kExitIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qdsim: config error: " << e.what() << "\n";
        return qdsim::kExitConfigError;
    }

    qdsim::Command cmd = qdsim::Command::dialogue;
    if (attack->parsed()) {
        cmd = qdsim::Command::attack;
    } else if (verify->parsed()) {
        cmd = qdsim::Command::verify;
    } else if (report->parsed()) {
        cmd = qdsim::Command::report;
    }
    return qdsim::run_command(cmd, cfg, std::cout, std::cerr);
}
