/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "trinity/kernel/checkpoint.hpp"

#include <cstring>

#include "trinity/error.hpp"
#include "trinity/util/binary_io.hpp"
#include "trinity/util/fs.hpp"

namespace trinity::kernel {
using nlohmann::json;

namespace {

constexpr std::string_view kMagic = "TRNK";

struct PayloadBuilder {
  json directory = json::array();
  std::vector<const ParamTensor<float>*> tensors;
  std::vector<std::string> names;
  std::uint64_t offset = 0;

  void Add(const ParamTensor<float>& t, std::string name) {
    directory.push_back(json{{"name", name}, {"dims", t.dims}, {"offset", offset}});
    offset += t.values.size() * sizeof(float);
    tensors.push_back(&t);
  }
};

std::size_t Elements(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) {
    if (d <= 0) throw ValidationError("trnk: non-positive tensor dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

ParamTensor<float> ReadTensor(const json& entry, std::span<const std::uint8_t> payload,
                              std::string name) {
  ParamTensor<float> t;
  t.name = std::move(name);
  entry.at("dims").get_to(t.dims);
  const std::uint64_t offset = entry.at("offset").get<std::uint64_t>();
  const std::size_t n = Elements(t.dims);
  if (offset > payload.size() || (payload.size() - offset) / sizeof(float) < n) {
    throw ValidationError("trnk: tensor '" + t.name + "' exceeds the payload");
  }
  util::ByteReader in(payload.subspan(offset, n * sizeof(float)), "trnk");
  t.values.resize(n);
  for (auto& v : t.values) v = in.F32();
  return t;
}

std::pair<json, std::span<const std::uint8_t>> Split(std::span<const std::uint8_t> bytes) {
  util::ByteReader in(bytes, "trnk");
  if (in.Bytes(4) != kMagic) throw ValidationError("trnk: bad magic");
  const std::uint16_t version = in.U16();
  if (version != kTrnkVersion) {
    throw ValidationError("trnk: unsupported version " + std::to_string(version));
  }
  const std::uint32_t header_len = in.U32();
  const std::string_view text = in.Bytes(header_len);
  json header;
  try {
    header = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trnk: malformed header: ") + e.what());
  }
  return {header, bytes.subspan(in.position())};
}

}  // namespace

std::vector<std::uint8_t> EncodeCheckpoint(const Checkpoint& ckpt) {
  ValidateModelSpec(ckpt.spec);
  PayloadBuilder b;
  for (const auto& t : ckpt.parameters.tensors) b.Add(t, t.name);
  json header{{"spec", ckpt.spec},
              {"epoch", ckpt.epoch},
              {"metrics", ckpt.metrics},
              {"parameters", b.directory}};
  if (ckpt.optimizer) {
    PayloadBuilder ob;
    ob.offset = b.offset;
    const auto& st = *ckpt.optimizer;
    for (std::size_t i = 0; i < st.m.tensors.size(); ++i) {
      ob.Add(st.m.tensors[i], st.m.tensors[i].name + "/adam_m");
      ob.Add(st.v.tensors[i], st.v.tensors[i].name + "/adam_v");
    }
    header["optimizer"] = json{{"step", st.step}, {"tensors", ob.directory}};
    b.tensors.insert(b.tensors.end(), ob.tensors.begin(), ob.tensors.end());
    b.offset = ob.offset;
  } else {
    header["optimizer"] = nullptr;
  }
  header["payload_bytes"] = b.offset;

  const std::string text = header.dump();
  util::ByteWriter out;
  out.Bytes(kMagic);
  out.U16(kTrnkVersion);
  out.U32(static_cast<std::uint32_t>(text.size()));
  out.Bytes(text);
  for (const auto* t : b.tensors) {
    for (float v : t->values) out.F32(v);
  }
  return out.Take();
}

json InspectCheckpoint(std::span<const std::uint8_t> bytes) { return Split(bytes).first; }

Checkpoint DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  auto [header, payload] = Split(bytes);
  try {
    if (header.at("payload_bytes").get<std::uint64_t>() != payload.size()) {
      throw ValidationError("trnk: payload size does not match header");
    }
    Checkpoint ckpt;
    header.at("spec").get_to(ckpt.spec);
    ValidateModelSpec(ckpt.spec);
    header.at("epoch").get_to(ckpt.epoch);
    ckpt.metrics = header.at("metrics");
    for (const auto& e : header.at("parameters")) {
      ckpt.parameters.tensors.push_back(ReadTensor(e, payload, e.at("name").get<std::string>()));
    }
    SegmentationModel<float> check(ckpt.spec, ckpt.parameters);  // validates the layout
    const json& opt = header.at("optimizer");
    if (!opt.is_null()) {
      AdamState st;
      opt.at("step").get_to(st.step);
      const auto& entries = opt.at("tensors");
      if (entries.size() != 2 * ckpt.parameters.tensors.size()) {
        throw ValidationError("trnk: optimizer state does not cover every parameter");
      }
      for (std::size_t i = 0; i < ckpt.parameters.tensors.size(); ++i) {
        const auto& p = ckpt.parameters.tensors[i];
        const json& em = entries[2 * i];
        const json& ev = entries[2 * i + 1];
        if (em.at("name") != p.name + "/adam_m" || ev.at("name") != p.name + "/adam_v") {
          throw ValidationError("trnk: optimizer entries out of order for '" + p.name + "'");
        }
        st.m.tensors.push_back(ReadTensor(em, payload, p.name));
        st.v.tensors.push_back(ReadTensor(ev, payload, p.name));
        if (st.m.tensors.back().dims != p.dims || st.v.tensors.back().dims != p.dims) {
          throw ValidationError("trnk: optimizer shape mismatch for '" + p.name + "'");
        }
      }
      ckpt.optimizer = std::move(st);
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("trnk: malformed header: ") + e.what());
  }
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  util::AtomicWriteFile(path, EncodeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(util::ReadBinaryFile(path));
}

}  // namespace trinity::kernel
