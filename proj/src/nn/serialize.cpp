// SPDX-License-Identifier: Apache-2.0
#include "codesum/nn/serialize.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "codesum/errors.hpp"

namespace codesum::nn {

namespace {

constexpr char kMagic[8] = {'C', 'S', 'U', 'M', 'P', 'A', 'R', 'M'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& path) : data_(data), path_(path) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + k])) << (8 * k);
    pos_ += 4;
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string raw(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw ValidationError("truncated parameter file: " + path_);
  }
  const std::string& data_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_model(const Model& model, const std::string& path) {
  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kParamFormatVersion);
  put_str(out, to_json(model.config()).dump());
  const auto& params = model.parameters();
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const Parameter& p : params) {
    put_str(out, p.name);
    put_u32(out, static_cast<std::uint32_t>(p.value.rows()));
    put_u32(out, static_cast<std::uint32_t>(p.value.cols()));
  }
  for (const Parameter& p : params) {
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      const float f = static_cast<float>(p.value(k));
      std::uint32_t bits;
      std::memcpy(&bits, &f, sizeof bits);
      put_u32(out, bits);
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("failed writing " + path);
}

Model load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  const std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  Reader r(data, path);
  if (r.raw(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) {
    throw ValidationError("not a parameter file: " + path);
  }
  const std::uint32_t version = r.u32();
  if (version != kParamFormatVersion) {
    throw ValidationError("unsupported parameter file version " + std::to_string(version));
  }
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(r.str());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config header in ") + path + ": " + e.what());
  }
  Model model(config_from_json(cfg));
  auto& params = model.parameters();
  const std::uint32_t count = r.u32();
  if (count != params.size()) {
    throw ValidationError("parameter file has " + std::to_string(count) + " tensors, config implies " +
                          std::to_string(params.size()));
  }
  for (Parameter& p : params) {
    const std::string name = r.str();
    const std::uint32_t rows = r.u32(), cols = r.u32();
    if (name != p.name || rows != p.value.rows() || cols != p.value.cols()) {
      throw ValidationError("tensor " + name + " [" + std::to_string(rows) + "x" + std::to_string(cols) +
                            "] does not match " + p.name + " [" + std::to_string(p.value.rows()) + "x" +
                            std::to_string(p.value.cols()) + "]");
    }
  }
  for (Parameter& p : params) {
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      const std::uint32_t bits = r.u32();
      float f;
      std::memcpy(&f, &bits, sizeof f);
      p.value(k) = static_cast<double>(f);
    }
  }
  if (!r.done()) throw ValidationError("trailing bytes in parameter file: " + path);
  return model;
}

}  // namespace codesum::nn
