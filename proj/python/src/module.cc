// Copyright 2026 The OVK Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the main OVK operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ovk/attestation.h"
#include "ovk/authenticator.h"
#include "ovk/bytes.h"
#include "ovk/crypto/envelope.h"
#include "ovk/crypto/suite.h"
#include "ovk/error.h"
#include "ovk/harness/race.h"
#include "ovk/harness/scenario.h"
#include "ovk/harness/world.h"
#include "ovk/ownership.h"

namespace py = pybind11;

namespace {

ovk::Bytes to_bytes(const py::bytes& b) {
  std::string_view s = b;
  return ovk::Bytes(s.begin(), s.end());
}

py::bytes to_py(ovk::ByteView b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

py::dict seed_dict(const ovk::seed::SeedRecord& r) {
  py::dict d;
  d["seed"] = to_py(r.seed);
  d["epoch"] = r.epoch;
  d["n_parties"] = r.n_parties();
  d["peer_models"] = r.peer_models;
  d["fingerprint"] = r.fingerprint();
  return d;
}

ovk::seed::SeedRecord seed_record(const py::bytes& seed, std::uint32_t n_parties) {
  ovk::seed::SeedRecord r;
  r.seed = to_bytes(seed);
  r.epoch = 1;
  r.peer_models.assign(n_parties > 0 ? n_parties - 1 : 0, "ovk-reference");
  return r;
}

py::dict derived_dict(const ovk::DerivedOvk& d) {
  py::dict out;
  out["ovpk"] = to_py(d.ovpk().view());
  out["r"] = to_py(d.metadata.r);
  out["m"] = to_py(d.metadata.m);
  out["n"] = d.metadata.n;
  return out;
}

}  // namespace

PYBIND11_MODULE(_ovk, m) {
  m.doc() = "Ownership verification keys: derivation, seed exchange and test harness";

  // Instances carry the error name in .code.
  static PyObject* error_type =
      py::exception<ovk::Error>(m, "OvkError").release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ovk::Error& e) {
      std::string name(e.name());
      py::object err = py::reinterpret_borrow<py::object>(error_type)(name + ": " + e.detail());
      err.attr("code") = name;
      PyErr_SetObject(error_type, err.ptr());
    }
  });

  m.def(
      "kdf",
      [](const py::bytes& seed, const py::bytes& r) {
        return to_py(ovk::crypto::kdf({to_bytes(seed), to_bytes(r)}));
      },
      py::arg("seed"), py::arg("r"), "HMAC-SHA256 keyed by the 32-byte seed over R.");

  m.def(
      "mac",
      [](const py::bytes& key, const py::bytes& message) {
        return to_py(ovk::crypto::mac(to_bytes(key), to_bytes(message)));
      },
      py::arg("key"), py::arg("message"));

  m.def(
      "seal",
      [](const std::string& password, const py::bytes& plaintext, std::uint32_t iterations) {
        return ovk::crypto::seal(password, to_bytes(plaintext), iterations).serialize();
      },
      py::arg("password"), py::arg("plaintext"),
      py::arg("iterations") = ovk::crypto::kDefaultPbkdf2Iterations,
      "Password envelope in compact five-segment form.");

  m.def(
      "open",
      [](const std::string& password, const std::string& compact) {
        return to_py(ovk::crypto::open(password, compact));
      },
      py::arg("password"), py::arg("compact"));

  m.def(
      "negotiate",
      [](std::uint32_t n, const std::string& password, std::uint32_t iterations) {
        auto maker = ovk::attestation::Manufacturer::create("python-manufacturer");
        std::vector<std::unique_ptr<ovk::authenticator::Authenticator>> owned;
        std::vector<ovk::authenticator::Authenticator*> devices;
        for (std::uint32_t i = 0; i < n; ++i) {
          owned.push_back(std::make_unique<ovk::authenticator::Authenticator>(
              "party" + std::to_string(i),
              ovk::attestation::DeviceIdentity::provision(maker, "ovk-reference")));
          owned.back()->unlock(true);
          devices.push_back(owned.back().get());
        }
        ovk::harness::NegotiationOptions options;
        options.password = password;
        options.iterations = iterations;
        py::list out;
        for (const auto& r : ovk::harness::negotiate_in_memory(devices, options)) {
          out.append(seed_dict(r));
        }
        return out;
      },
      py::arg("n"), py::arg("password"),
      py::arg("iterations") = ovk::crypto::kMinPbkdf2Iterations,
      "Runs an n-party seed exchange in memory and returns each party's seed.");

  m.def(
      "derive_ovpk",
      [](const py::bytes& seed, const std::string& service_id, const py::object& r,
         std::uint32_t n_parties) -> py::object {
        auto record = seed_record(seed, n_parties);
        if (r.is_none()) return derived_dict(ovk::derive_fresh(record, service_id));
        auto d = ovk::derive_with_r(record, service_id, to_bytes(r.cast<py::bytes>()));
        if (!d) return py::none();
        return derived_dict(*d);
      },
      py::arg("seed"), py::arg("service_id"), py::arg("r") = py::none(),
      py::arg("n_parties") = 2,
      "OVPK and metadata for a service; None when R gives an out-of-range scalar.");

  m.def(
      "metadata_matches",
      [](const py::bytes& seed, const std::string& service_id, const py::bytes& r,
         const py::bytes& mac, std::uint32_t n) {
        ovk::OvkMetadata md{to_bytes(r), to_bytes(mac), n};
        return ovk::metadata_matches(seed_record(seed, n), service_id, md);
      },
      py::arg("seed"), py::arg("service_id"), py::arg("r"), py::arg("m"), py::arg("n") = 2);

  m.def(
      "run_scenario",
      [](const std::string& scenario_json) {
        auto doc = nlohmann::json::parse(scenario_json, nullptr, false);
        if (doc.is_discarded()) {
          throw ovk::Error(ovk::ErrorCode::kScenarioParse, "invalid JSON");
        }
        auto report = ovk::harness::run_scenario(doc);
        py::list steps;
        for (const auto& s : report.steps) {
          py::dict d;
          d["step"] = s.index;
          d["label"] = s.label;
          d["action"] = s.action;
          d["outcome"] = s.outcome;
          d["expected"] = s.expected ? py::object(py::str(*s.expected)) : py::none();
          d["ok"] = s.ok;
          d["detail"] = s.detail;
          steps.append(d);
        }
        return steps;
      },
      py::arg("scenario_json"), "Runs a scenario document and returns one dict per step.");

  m.def(
      "run_race",
      [](std::uint32_t n, std::uint32_t n_user, std::uint32_t n_attacker,
         std::optional<std::string> order, bool attacker_first,
         std::optional<std::uint64_t> ordering_seed) {
        ovk::harness::RaceConfig cfg;
        cfg.n = n;
        cfg.n_user = n_user;
        cfg.n_attacker = n_attacker;
        cfg.order = order;
        cfg.attacker_first = attacker_first;
        cfg.ordering_seed = ordering_seed;
        auto r = ovk::harness::run_race(cfg);
        py::dict d;
        d["winner"] = std::string(ovk::harness::winner_name(r.winner));
        d["decided_early"] = r.decided_early;
        d["sequence"] = r.sequence;
        d["outcomes"] = r.outcomes;
        return d;
      },
      py::arg("n"), py::arg("n_user"), py::arg("n_attacker"), py::arg("order") = py::none(),
      py::arg("attacker_first") = false, py::arg("ordering_seed") = py::none());
}
