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


#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdlib>

#include "qdsim/adversary.hpp"
#include "qdsim/analysis.hpp"
#include "qdsim/runner.hpp"

namespace py = pybind11;
using namespace qdsim;

namespace {

std::vector<Complex> amplitudes(const Ket& k) { return {k.amplitudes().begin(), k.amplitudes().end()}; }

LogicalState parse_state(const std::string& s) {
    for (auto st : {LogicalState::L0, LogicalState::L1, LogicalState::Lplus, LogicalState::Lminus}) {
        if (to_string(st) == s) {
            return st;
        }
    }
    throw std::invalid_argument("unknown logical state '" + s + "' (expected L0, L1, Lplus or Lminus)");
}

std::string run_document(const std::string& command, const std::string& settings) {
    const auto file = overrides_from_json(Json::parse(settings));
    const auto cfg = build_run_config(file, {}, std::getenv("QDSIM_SEED"));
    Json doc;
    if (command == "dialogue") {
        doc = dialogue_document(cfg);
    } else if (command == "attack") {
        doc = attack_document(cfg);
    } else if (command == "verify") {
        doc = verify_document(cfg);
    } else if (command == "report") {
        doc = report_document(cfg);
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return doc.dump();
}

}  // namespace

PYBIND11_MODULE(_qdsim, m) {
    m.doc() = "Decoherence-free quantum dialogue simulator (C++ core)";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("run_document", &run_document, py::arg("command"), py::arg("settings_json"),
          "Runs dialogue|attack|verify|report on a JSON settings object; returns the JSON document.");

    m.def(
        "encode",
        [](const std::string& enc, const std::string& state) { return amplitudes(encode(parse_encoding(enc), parse_state(state))); },
        py::arg("encoding"), py::arg("state"));
    m.def(
        "resource_state", [](const std::string& enc) { return amplitudes(prepare_resource(parse_encoding(enc))); },
        py::arg("encoding"));
    m.def(
        "distilled_resource",
        [](const std::string& enc) {
            const auto e = parse_encoding(enc);
            return amplitudes(distill_key(e, prepare_resource(e)));
        },
        py::arg("encoding"));

    m.def(
        "leakage_entropy",
        [](std::optional<int> announcement, std::optional<int> public_m) {
            const auto r = leakage_entropy({announcement, public_m});
            py::dict d;
            d["posterior"] = r.posterior;
            d["entropy_bits"] = r.entropy_bits;
            d["leakage_bits"] = r.leakage_bits;
            return d;
        },
        py::arg("announcement") = py::none(), py::arg("public_m") = py::none());

    m.def(
        "efficiency",
        [](const std::string& mode) {
            const auto e = efficiency(parse_efficiency_mode(mode));
            py::dict d;
            d["b_s"] = e.b_s;
            d["q_t"] = e.q_t;
            d["b_t"] = e.b_t;
            d["eta"] = e.eta;
            d["eta_fraction"] = e.eta_fraction;
            return d;
        },
        py::arg("mode") = "qd");

    m.def(
        "key_reuse_correlation",
        [](double theta) {
            const auto c = key_reuse_correlation(theta);
            return std::make_pair(c.mi_z, c.mi_x);
        },
        py::arg("theta"));

    m.def(
        "per_check_detection",
        [](const std::string& attack, const std::string& enc, int control, const std::string& substitution) {
            const auto e = parse_encoding(enc);
            switch (parse_attack_kind(attack)) {
                case AttackKind::intercept_resend_logical:
                    return intercept_logical_decoy_detection(e);
                case AttackKind::intercept_resend_physical:
                    return intercept_physical_decoy_detection(e);
                case AttackKind::entangle_ancilla:
                    return entangle_ancilla_decoy_detection(e, control);
                case AttackKind::capture_sc:
                    return capture_sc_sample_violation(e, parse_substitution_policy(substitution));
                default:
                    return 0.0;
            }
        },
        py::arg("attack"), py::arg("encoding"), py::arg("control") = 0, py::arg("substitution") = "random_logical",
        "Exact probability that one decoy (or one sampled resource state for capture_sc) exposes the attack.");

    m.def(
        "wilson_interval",
        [](std::size_t successes, std::size_t trials) {
            const auto w = wilson_interval(successes, trials);
            return std::make_pair(w[0], w[1]);
        },
        py::arg("successes"), py::arg("trials"));

    m.def(
        "identity_suite",
        [](std::optional<std::string> enc, std::uint64_t seed) {
            Rng rng(seed);
            std::optional<Encoding> only;
            if (enc) {
                only = parse_encoding(*enc);
            }
            py::list out;
            for (const auto& c : identity_suite(only, rng)) {
                py::dict d;
                d["name"] = c.name;
                d["encoding"] = c.encoding ? py::object(py::str(to_string(*c.encoding))) : py::object(py::none());
                d["passed"] = c.passed;
                d["max_error"] = c.max_error;
                out.append(d);
            }
            return out;
        },
        py::arg("encoding") = py::none(), py::arg("seed") = 1);
}
