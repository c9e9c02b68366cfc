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


"""Smoke tests for the Python bindings, checked against independent code."""

import base64
import hashlib
import hmac
import json
import os
import pathlib
import struct

import pytest

import ovk

ec = pytest.importorskip("cryptography.hazmat.primitives.asymmetric.ec")
from cryptography.hazmat.primitives import hashes, serialization  # noqa: E402
from cryptography.hazmat.primitives.ciphers.aead import AESGCM  # noqa: E402
from cryptography.hazmat.primitives.kdf.pbkdf2 import PBKDF2HMAC  # noqa: E402
from cryptography.hazmat.primitives.keywrap import aes_key_unwrap  # noqa: E402

ROOT = pathlib.Path(__file__).resolve().parents[2]
P256_ORDER = 0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551


def b64url_decode(text):
    return base64.urlsafe_b64decode(text + "=" * (-len(text) % 4))


def public_point(scalar_bytes):
    key = ec.derive_private_key(int.from_bytes(scalar_bytes, "big"), ec.SECP256R1())
    return key.public_key().public_bytes(
        serialization.Encoding.X962, serialization.PublicFormat.UncompressedPoint
    )


def test_kdf_and_mac_are_hmac_sha256():
    seed, r = os.urandom(32), os.urandom(32)
    assert ovk.kdf(seed, r) == hmac.new(seed, r, hashlib.sha256).digest()
    key, msg = os.urandom(32), b"message"
    assert ovk.mac(key, msg) == hmac.new(key, msg, hashlib.sha256).digest()


def test_bad_sizes_raise_ovk_error():
    with pytest.raises(ovk.OvkError) as info:
        ovk.kdf(os.urandom(31), os.urandom(32))
    assert info.value.code == "InvalidInput"


def test_envelope_opens_with_a_standard_implementation():
    plaintext = b'{"share":"abc"}'
    compact = ovk.seal("pw", plaintext, iterations=1000)
    header_b64, wrapped, iv, ciphertext, tag = compact.split(".")
    header = json.loads(b64url_decode(header_b64))
    assert header["alg"] == "PBES2-HS256+A128KW"
    assert header["enc"] == "A128GCM"
    salt = header["alg"].encode() + b"\x00" + b64url_decode(header["p2s"])
    kek = PBKDF2HMAC(
        algorithm=hashes.SHA256(), length=16, salt=salt, iterations=header["p2c"]
    ).derive(b"pw")
    cek = aes_key_unwrap(kek, b64url_decode(wrapped))
    opened = AESGCM(cek).decrypt(
        b64url_decode(iv),
        b64url_decode(ciphertext) + b64url_decode(tag),
        header_b64.encode("ascii"),
    )
    assert opened == plaintext
    assert ovk.open("pw", compact) == plaintext
    with pytest.raises(ovk.OvkError) as info:
        ovk.open("wrong", compact)
    assert info.value.code == "AuthFailure"


def test_negotiated_parties_agree():
    for n in (2, 3, 4):
        seeds = ovk.negotiate(n, "exchange password")
        assert len(seeds) == n
        assert len({s["seed"] for s in seeds}) == 1
        assert len({s["fingerprint"] for s in seeds}) == 1
        assert all(s["n_parties"] == n for s in seeds)


def test_derivation_matches_independent_computation():
    seed, r = os.urandom(32), os.urandom(32)
    sid = "https://shop.example"
    derived = ovk.derive_ovpk(seed, sid, r, n_parties=3)
    ovsk = hmac.new(seed, r, hashlib.sha256).digest()
    assert 1 <= int.from_bytes(ovsk, "big") < P256_ORDER
    assert derived["ovpk"] == public_point(ovsk)
    mac_input = struct.pack(">I", len(r)) + r + struct.pack(">I", len(sid)) + sid.encode()
    assert derived["m"] == hmac.new(ovsk, mac_input, hashlib.sha256).digest()
    assert derived["n"] == 3
    assert ovk.metadata_matches(seed, sid, r, derived["m"], 3)
    assert not ovk.metadata_matches(seed, "https://sh0p.example", r, derived["m"], 3)


def test_fresh_derivation_is_repeatable():
    seed = os.urandom(32)
    fresh = ovk.derive_ovpk(seed, "https://a.example")
    again = ovk.derive_ovpk(seed, "https://a.example", fresh["r"])
    assert again["ovpk"] == fresh["ovpk"]


def test_bundled_scenario_passes():
    text = (ROOT / "scenarios" / "usecase_nine_steps.json").read_text()
    steps = ovk.run_scenario(text)
    assert steps and all(s["ok"] for s in steps)
    with pytest.raises(ovk.OvkError):
        ovk.run_scenario("{not json")


def test_race_outcomes():
    assert ovk.run_race(3, 2, 1, order="auu")["winner"] == "user"
    assert ovk.run_race(4, 2, 2, order="auua")["winner"] == "attacker"
    assert ovk.run_race(4, 2, 2, order="uaau")["winner"] == "user"
    assert ovk.run_race(2, 1, 1, attacker_first=True)["winner"] == "attacker"
