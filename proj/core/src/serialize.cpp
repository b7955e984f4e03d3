#include "hyerslab/serialize.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace hyerslab {

namespace {

void dump_string(const std::string& s, std::string& out) {
  // Reuse nlohmann's escaping for strings.
  out += Json(s).dump();
}

void dump_number(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  // Keep floats recognisable as floats on re-parse.
  std::string_view sv(buf);
  if (sv.find_first_of(".eEn") == std::string_view::npos) out += ".0";
}

void newline(std::string& out, int indent, int depth) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void dump(const Json& j, std::string& out, int indent, int depth) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      // nlohmann::json objects are std::map-backed, so iteration is key-sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(out, indent, depth + 1);
        dump_string(it.key(), out);
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      newline(out, indent, depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(out, indent, depth + 1);
        dump(v, out, indent, depth + 1);
      }
      newline(out, indent, depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      dump_number(j.get<double>(), out);
      return;
    case Json::value_t::string:
      dump_string(j.get_ref<const std::string&>(), out);
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string canonical_dump(const Json& j, int indent) {
  std::string out;
  dump(j, out, indent, 0);
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xF];
  }
  return hex;
}

std::string content_digest(const Json& j) { return sha256_hex(canonical_dump(j)); }

Json to_json(const Point& x) {
  Json arr = Json::array();
  for (double v : x.coords()) arr.push_back(v);
  return arr;
}

Point point_from_json(const Json& j) {
  if (j.is_number()) return Point{j.get<double>()};
  if (!j.is_array()) throw DomainError("point must be a number or an array of numbers");
  std::vector<double> coords;
  for (const auto& v : j) {
    if (!v.is_number()) throw DomainError("point coordinates must be numbers");
    coords.push_back(v.get<double>());
  }
  return Point(std::span<const double>(coords));
}

}  // namespace hyerslab
