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

// Published known-answer vectors shared by the unit and acceptance suites.

#ifndef OVK_TESTS_SUPPORT_VECTORS_H_
#define OVK_TESTS_SUPPORT_VECTORS_H_

#include <string>
#include <vector>

#include "ovk/bytes.h"

namespace ovk::vectors {

struct HmacVector {
  Bytes key;
  Bytes message;
  std::string mac_hex;
};

// RFC 4231 test cases 1-4, 6 and 7 (HMAC-SHA-256).
inline std::vector<HmacVector> rfc4231() {
  return {
      {Bytes(20, 0x0b), to_bytes("Hi There"),
       "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"},
      {to_bytes("Jefe"), to_bytes("what do ya want for nothing?"),
       "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"},
      {Bytes(20, 0xaa), Bytes(50, 0xdd),
       "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"},
      {from_hex("0102030405060708090a0b0c0d0e0f10111213141516171819"), Bytes(50, 0xcd),
       "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b"},
      {Bytes(131, 0xaa), to_bytes("Test Using Larger Than Block-Size Key - Hash Key First"),
       "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54"},
      {Bytes(131, 0xaa),
       to_bytes("This is a test using a larger than block-size key and a larger "
                "than block-size data. The key needs to be hashed before being "
                "used by the HMAC algorithm."),
       "9b09ffa71b942fcb27635fbcd5b0e944bfdc63644f0713938a7f51535c3a35e2"},
  };
}

struct GcmVector {
  Bytes key;
  Bytes iv;
  Bytes aad;
  Bytes plaintext;
  std::string ciphertext_hex;
  std::string tag_hex;
};

// McGrew and Viega GCM specification test cases 1-4 (AES-128), as used in
// the NIST validation suite.
inline std::vector<GcmVector> nist_gcm() {
  Bytes key = from_hex("feffe9928665731c6d6a8f9467308308");
  Bytes iv = from_hex("cafebabefacedbaddecaf888");
  Bytes pt = from_hex(
      "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a721c3c0c95956809"
      "532fcf0e2449a6b525b16aedf5aa0de657ba637b391aafd255");
  std::string ct =
      "42831ec2217774244b7221b784d0d49ce3aa212f2c02a4e035c17e2329aca12e21d514b254"
      "66931c7d8f6a5aac84aa051ba30b396a0aac973d58e091473f5985";
  return {
      {Bytes(16, 0), Bytes(12, 0), {}, {}, "", "58e2fccefa7e3061367f1d57a4e7455a"},
      {Bytes(16, 0), Bytes(12, 0), {}, Bytes(16, 0), "0388dace60b6a392f328c2b971b2fe78",
       "ab6e47d42cec13bdf53a67b21257bddf"},
      {key, iv, {}, pt, ct, "4d5c2af327cd64a62cf35abd2ba6fab4"},
      {key, iv, from_hex("feedfacedeadbeeffeedfacedeadbeefabaddad2"),
       Bytes(pt.begin(), pt.begin() + 60), ct.substr(0, 120),
       "5bc94fbc3221a5db94fae95ae7121a47"},
  };
}

struct EcdsaVector {
  Bytes public_key;  // uncompressed
  Bytes message;
  Bytes signature;  // r || s
  bool valid;
};

// RFC 6979 appendix A.2.5 (P-256, SHA-256), plus the same signatures
// paired with the wrong message.
inline std::vector<EcdsaVector> rfc6979_p256() {
  Bytes pub = from_hex(
      "0460FED4BA255A9D31C961EB74C6356D68C049B8923B61FA6CE669622E60F29FB67903FE1008B8BC"
      "99A41AE9E95628BC64F2F1B20C2D7E9F5177A3C294D4462299");
  Bytes sample = from_hex(
      "EFD48B2AACB6A8FD1140DD9CD45E81D69D2C877B56AAF991C34D0EA84EAF3716F7CB1C942D657C41"
      "D436C7A1B6E29F65F3E900DBB9AFF4064DC4AB2F843ACDA8");
  Bytes test = from_hex(
      "F1ABB023518351CD71D881567B1EA663ED3EFCF6C5132B354F28D3B0B7D38367019F4113742A2B14"
      "BD25926B49C649155F267E60D3814B4C0CC84250E46F0083");
  return {
      {pub, to_bytes("sample"), sample, true},
      {pub, to_bytes("test"), test, true},
      {pub, to_bytes("sample"), test, false},
      {pub, to_bytes("test"), sample, false},
  };
}

inline const char* kRfc6979PrivateKey =
    "C9AFA9D845BA75166B5C215767B1D6934E50C3DB36E89B127B8A622B120F6721";

}  // namespace ovk::vectors

#endif  // OVK_TESTS_SUPPORT_VECTORS_H_
