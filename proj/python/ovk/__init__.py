# Copyright 2026 The OVK Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Ownership verification keys for multi-device passkey accounts."""

from ._ovk import (
    OvkError,
    derive_ovpk,
    kdf,
    mac,
    metadata_matches,
    negotiate,
    open,
    run_race,
    run_scenario,
    seal,
)

__all__ = [
    "OvkError",
    "derive_ovpk",
    "kdf",
    "mac",
    "metadata_matches",
    "negotiate",
    "open",
    "run_race",
    "run_scenario",
    "seal",
]
