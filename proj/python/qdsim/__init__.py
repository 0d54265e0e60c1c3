# Copyright 2026 The qdsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Decoherence-free quantum dialogue simulator."""

import json

from qdsim._qdsim import (
    ConfigError,
    IoError,
    distilled_resource,
    efficiency,
    encode,
    identity_suite,
    key_reuse_correlation,
    leakage_entropy,
    per_check_detection,
    resource_state,
    wilson_interval,
)
from qdsim import _qdsim

__all__ = [
    "ConfigError",
    "IoError",
    "attack",
    "dialogue",
    "distilled_resource",
    "efficiency",
    "encode",
    "identity_suite",
    "key_reuse_correlation",
    "leakage_entropy",
    "per_check_detection",
    "report",
    "resource_state",
    "verify",
    "wilson_interval",
]


def _run(command, settings):
    return json.loads(_qdsim.run_document(command, json.dumps(settings)))


def dialogue(**settings):
    """Key sharing plus dialogue rounds. Keys match the CLI config file."""
    return _run("dialogue", settings)


def attack(**settings):
    """Detection statistics for one attack."""
    return _run("attack", settings)


def verify(**settings):
    """Identity and invariance suites."""
    return _run("verify", settings)


def report(**settings):
    """Efficiency and leakage report."""
    return _run("report", settings)
