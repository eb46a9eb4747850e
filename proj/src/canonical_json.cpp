#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pedmotion/error.hpp"
#include "pedmotion/motion_io.hpp"

namespace pedmotion {

namespace {

void emit_number(std::string& out, const Json& v) {
  if (v.is_number_unsigned()) {
    out += std::to_string(v.get<std::uint64_t>());
  } else if (v.is_number_integer()) {
    out += std::to_string(v.get<std::int64_t>());
  } else {
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ErrorCode::Validation, "cannot serialize a non-finite number");
    out += fmt::format("{:.17g}", d + 0.0);
  }
}

void emit_compact(std::string& out, const Json& v) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, child] : v.items()) {
        if (!first) out += ", ";
        first = false;
        out += Json(key).dump();
        out += ": ";
        emit_compact(out, child);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const Json& child : v) {
        if (!first) out += ", ";
        first = false;
        emit_compact(out, child);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
      emit_number(out, v);
      break;
    default:
      out += v.dump();
  }
}

bool has_nested(const Json& array) {
  for (const Json& child : array) {
    if (child.is_object() || child.is_array()) return true;
  }
  return false;
}

void emit_pretty(std::string& out, const Json& v, int indent) {
  if (v.is_object() && !v.empty()) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    out += "{\n";
    bool first = true;
    for (const auto& [key, child] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      out += Json(key).dump();
      out += ": ";
      emit_pretty(out, child, indent + 2);
    }
    out += '\n';
    out.append(static_cast<std::size_t>(indent), ' ');
    out += '}';
  } else if (v.is_array() && has_nested(v)) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    out += "[\n";
    bool first = true;
    for (const Json& child : v) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      emit_compact(out, child);
    }
    out += '\n';
    out.append(static_cast<std::size_t>(indent), ' ');
    out += ']';
  } else {
    emit_compact(out, v);
  }
}

}  // namespace

std::string dump_canonical(const Json& doc) {
  std::string out;
  emit_pretty(out, doc, 0);
  out += '\n';
  return out;
}

std::string dump_line(const Json& doc) {
  std::string out;
  emit_compact(out, doc);
  return out;
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::Parse, fmt::format("{}: malformed JSON: {}", what, e.what()));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidInput, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Processing, fmt::format("cannot write '{}'", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorCode::Processing, fmt::format("failed writing '{}'", path.string()));
}

}  // namespace pedmotion
