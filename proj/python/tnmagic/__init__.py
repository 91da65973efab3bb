# Copyright 2026 The tnmagic Authors
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


"""Entanglement and magic diagnostics for 2D fields encoded as matrix product states."""

from tnmagic._tnmagic import (
    EncodedState,
    Mps,
    bspline_resample,
    coarse_grain_study,
    decode_field,
    encode_field,
    entropy_profile,
    estimate_m2,
    load_field,
    mps_from_dense,
    run_cli,
    shift_sweep,
    sre2_replica,
    sre_dense,
    synth_shear_ic,
)

__version__ = "0.1.0"

__all__ = [
    "EncodedState",
    "Mps",
    "bspline_resample",
    "coarse_grain_study",
    "decode_field",
    "encode_field",
    "entropy_profile",
    "estimate_m2",
    "load_field",
    "mps_from_dense",
    "run_cli",
    "shift_sweep",
    "sre2_replica",
    "sre_dense",
    "synth_shear_ic",
]
