# Copyright 2026 The smoothdyn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Smoothed dynamic graph simulation and counting."""

import json as _json

from ._smoothdyn import (
    ContractViolation,
    Counter,
    FormatError,
    Graph,
    InvariantViolation,
    ParameterError,
    SamplingError,
    connected,
    expected_expensive_fraction,
    poisson_even_mass,
    poisson_samples,
    s_cycles,
    st_paths,
    verify,
)
from . import _smoothdyn

__all__ = [
    "ContractViolation",
    "Counter",
    "FormatError",
    "Graph",
    "InvariantViolation",
    "ParameterError",
    "SamplingError",
    "bench",
    "connected",
    "expected_expensive_fraction",
    "poisson_even_mass",
    "poisson_samples",
    "reduce",
    "s_cycles",
    "simulate",
    "st_paths",
    "verify",
]


def simulate(**config):
    """Runs the simulate command; keyword arguments are config fields."""
    return _smoothdyn.simulate(_json.dumps(config))


def bench(**config):
    """Runs the bench command; keyword arguments are config fields."""
    return _smoothdyn.bench(_json.dumps(config))


def reduce(**config):
    """Runs the reduce command; keyword arguments are config fields."""
    return _smoothdyn.reduce(_json.dumps(config))
