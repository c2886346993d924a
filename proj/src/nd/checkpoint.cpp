#include "sememe/nd/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "sememe/common/error.hpp"
#include "sememe/common/kv_config.hpp"

namespace sememe::nd {

namespace {

constexpr const char* kFormat = "sememe-checkpoint";
constexpr int kVersion = 1;

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffULL) << (8 * (7 - i));
    return out;
  }
  return bits;
}

std::string shape_field(const Shape& shape) {
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i != 0) out += ",";
    out += std::to_string(shape[i]);
  }
  return out.empty() ? "scalar" : out;
}

Shape parse_shape(const std::string& text) {
  if (text == "scalar") return {};
  Shape shape;
  for (const auto& part : split(text, ',')) shape.push_back(std::stoull(part));
  return shape;
}

std::filesystem::path blob_path(const std::filesystem::path& manifest) {
  auto p = manifest;
  p += ".bin";
  return p;
}

}  // namespace

std::string Checkpoint::meta_value(const std::string& key, const std::string& fallback) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return fallback;
}

void save_checkpoint(const std::filesystem::path& path, const ParamSet& params, const Metadata& meta) {
  const auto blob = blob_path(path);
  std::ofstream manifest(path, std::ios::binary | std::ios::trunc);
  std::ofstream data(blob, std::ios::binary | std::ios::trunc);
  if (!manifest || !data) throw DataError(fmt::format("cannot write checkpoint '{}'", path.string()));

  manifest << "format=" << kFormat << "\n";
  manifest << "version=" << kVersion << "\n";
  manifest << "dtype=f64\n";
  manifest << "blob=" << blob.filename().string() << "\n";
  for (const auto& [k, v] : meta) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw Error(fmt::format("checkpoint metadata '{}' contains a reserved character", k));
    }
    manifest << "meta." << k << "=" << v << "\n";
  }

  std::uint64_t offset = 0;
  for (const auto& [name, tensor] : params) {
    if (name.find_first_of(" \n=") != std::string::npos) {
      throw Error(fmt::format("parameter name '{}' cannot be stored in a manifest", name));
    }
    const std::uint64_t bytes = tensor.size() * sizeof(double);
    manifest << "param=" << name << " shape=" << shape_field(tensor.shape()) << " dtype=f64 offset=" << offset
             << " bytes=" << bytes << "\n";
    for (double v : tensor.values()) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
      data.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
    }
    offset += bytes;
  }
  if (!manifest.flush() || !data.flush()) throw DataError(fmt::format("failed writing checkpoint '{}'", path.string()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream manifest(path);
  if (!manifest) throw DataError(fmt::format("cannot open checkpoint '{}'", path.string()));

  struct ParamRecord {
    std::string name;
    Shape shape;
    std::uint64_t offset = 0;
    std::uint64_t bytes = 0;
  };
  std::vector<ParamRecord> records;
  Checkpoint ckpt;
  std::map<std::string, std::string> header;

  std::string line;
  int line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("param=", 0) == 0) {
      ParamRecord rec;
      std::istringstream fields(line);
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw DataError(fmt::format("{}:{}: malformed field '{}'", path.string(), line_no, field));
        const auto key = field.substr(0, eq);
        const auto value = field.substr(eq + 1);
        if (key == "param") rec.name = value;
        else if (key == "shape") rec.shape = parse_shape(value);
        else if (key == "offset") rec.offset = std::stoull(value);
        else if (key == "bytes") rec.bytes = std::stoull(value);
        else if (key == "dtype" && value != "f64") {
          throw DataError(fmt::format("{}:{}: unsupported dtype '{}'", path.string(), line_no, value));
        }
      }
      if (rec.bytes != numel(rec.shape) * sizeof(double)) {
        throw DataError(fmt::format("{}:{}: byte count does not match shape", path.string(), line_no));
      }
      records.push_back(std::move(rec));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(fmt::format("{}:{}: expected key=value", path.string(), line_no));
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 1);
    if (key.rfind("meta.", 0) == 0) {
      ckpt.meta.emplace_back(key.substr(5), value);
    } else {
      header[key] = value;
    }
  }
  if (header["format"] != kFormat) throw DataError(fmt::format("'{}' is not a sememe checkpoint", path.string()));
  if (header["version"] != std::to_string(kVersion)) {
    throw DataError(fmt::format("'{}': unsupported checkpoint version '{}'", path.string(), header["version"]));
  }

  const auto blob = path.parent_path() / header["blob"];
  std::ifstream data(blob, std::ios::binary);
  if (!data) throw DataError(fmt::format("cannot open checkpoint blob '{}'", blob.string()));
  for (const auto& rec : records) {
    std::vector<Real> values(numel(rec.shape));
    data.seekg(static_cast<std::streamoff>(rec.offset));
    for (auto& v : values) {
      std::uint64_t bits = 0;
      data.read(reinterpret_cast<char*>(&bits), sizeof(bits));
      v = std::bit_cast<double>(to_little_endian(bits));
    }
    if (!data) throw DataError(fmt::format("checkpoint blob '{}' is truncated", blob.string()));
    ckpt.params.add(rec.name, Tensor::from(rec.shape, std::move(values), true));
  }
  return ckpt;
}

}  // namespace sememe::nd
