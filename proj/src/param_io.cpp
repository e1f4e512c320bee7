/*
 * Copyright 2026 The mlpinit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mlpinit/param_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "mlpinit/errors.hpp"

namespace mlpinit {

namespace {

constexpr char kMagic[4] = {'M', 'L', 'P', 'W'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

void put_f32(std::string& out, float v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw ParseError("truncated parameter file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, bytes_.data() + pos_, 4);
    pos_ += 4;
    return v;
  }
  float f32() {
    need(4);
    float v;
    std::memcpy(&v, bytes_.data() + pos_, 4);
    pos_ += 4;
    return v;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

template <typename T>
std::string serialize_params(const ParamSet<T>& params) {
  std::string out(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& t : params) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out += t.name;
    put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
    for (auto d : t.dims) put_u32(out, static_cast<std::uint32_t>(d));
    for (T v : t.value.values()) put_f32(out, static_cast<float>(v));
  }
  return out;
}

template <typename T>
ParamSet<T> deserialize_params(const std::string& bytes) {
  Reader r(bytes);
  if (r.str(4) != std::string(kMagic, 4)) throw ParseError("not a parameter file (bad magic)");
  if (auto v = r.u32(); v != kVersion) {
    throw ParseError("unsupported parameter file version " + std::to_string(v));
  }
  const std::uint32_t count = r.u32();
  ParamSet<T> params;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str(r.u32());
    std::uint32_t rank = r.u32();
    if (rank < 1 || rank > 2) throw ParseError("tensor '" + name + "' has unsupported rank");
    std::vector<std::size_t> dims;
    for (std::uint32_t k = 0; k < rank; ++k) dims.push_back(r.u32());
    std::size_t rows = rank == 2 ? dims[0] : 1;
    std::size_t cols = rank == 2 ? dims[1] : dims[0];
    Matrix<T> value(rows, cols);
    for (auto& v : value.values()) v = static_cast<T>(r.f32());
    params.add(std::move(name), std::move(dims), std::move(value));
  }
  if (!r.done()) throw ParseError("trailing bytes after parameter tensors");
  return params;
}

template <typename T>
void save_params(const ParamSet<T>& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  std::string bytes = serialize_params(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

template <typename T>
ParamSet<T> load_params(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_params<T>(bytes);
}

template std::string serialize_params(const ParamSet<float>&);
template std::string serialize_params(const ParamSet<double>&);
template ParamSet<float> deserialize_params(const std::string&);
template ParamSet<double> deserialize_params(const std::string&);
template void save_params(const ParamSet<float>&, const std::filesystem::path&);
template void save_params(const ParamSet<double>&, const std::filesystem::path&);
template ParamSet<float> load_params(const std::filesystem::path&);
template ParamSet<double> load_params(const std::filesystem::path&);

}  // namespace mlpinit
