#include "fockbell/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fockbell/errors.hpp"

namespace fockbell {

Json Json::object() {
  Json j;
  j.kind_ = Kind::Object;
  return j;
}

Json Json::array() {
  Json j;
  j.kind_ = Kind::Array;
  return j;
}

Json Json::number(double value) {
  if (!std::isfinite(value)) throw StructuralError("non-finite number in report");
  Json j;
  j.kind_ = Kind::Double;
  j.double_ = value;
  return j;
}

Json Json::integer(long long value) {
  Json j;
  j.kind_ = Kind::Int;
  j.int_ = value;
  return j;
}

Json Json::boolean(bool value) {
  Json j;
  j.kind_ = Kind::Bool;
  j.bool_ = value;
  return j;
}

Json Json::string(std::string value) {
  Json j;
  j.kind_ = Kind::String;
  j.string_ = std::move(value);
  return j;
}

Json& Json::set(const std::string& key, Json value) {
  if (kind_ != Kind::Object) throw StructuralError("set() on a non-object JSON value");
  members_.emplace_back(key, std::move(value));
  return *this;
}

Json& Json::push(Json value) {
  if (kind_ != Kind::Array) throw StructuralError("push() on a non-array JSON value");
  items_.push_back(std::move(value));
  return *this;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void indent_to(std::string& out, int indent, int depth) {
  if (indent > 0) out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
  const char* nl = indent > 0 ? "\n" : "";
  switch (kind_) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += bool_ ? "true" : "false"; break;
    case Kind::Int: out += std::to_string(int_); break;
    case Kind::Double: out += format_double(double_); break;
    case Kind::String: write_escaped(out, string_); break;
    case Kind::Array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      const bool scalars_only =
          std::all_of(items_.begin(), items_.end(), [](const Json& item) {
            return item.kind_ != Kind::Array && item.kind_ != Kind::Object;
          });
      if (scalars_only) {
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
          if (i > 0) out += indent > 0 ? ", " : ",";
          items_[i].write(out, 0, 0);
        }
        out += ']';
        break;
      }
      out += '[';
      out += nl;
      for (std::size_t i = 0; i < items_.size(); ++i) {
        indent_to(out, indent, depth + 1);
        items_[i].write(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += nl;
      }
      indent_to(out, indent, depth);
      out += ']';
      break;
    }
    case Kind::Object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      out += nl;
      for (std::size_t i = 0; i < members_.size(); ++i) {
        indent_to(out, indent, depth + 1);
        write_escaped(out, members_[i].first);
        out += indent > 0 ? ": " : ":";
        members_[i].second.write(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += nl;
      }
      indent_to(out, indent, depth);
      out += '}';
      break;
    }
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

namespace {

Json mode_to_json(const ModeId& m) {
  Json j = Json::object();
  j.set("party", Json::string(m.party == Party::A ? "A" : "B"));
  j.set("field_tag", Json::integer(m.field_tag));
  j.set("index", Json::integer(m.index));
  return j;
}

Json occupation_to_json(const Occupation& occ, const std::vector<ModeId>& modes) {
  Json entries = Json::array();
  for (const auto& [mode, count] : occ.entries()) {
    const auto it = std::lower_bound(modes.begin(), modes.end(), mode);
    Json pair = Json::array();
    pair.push(Json::integer(static_cast<long long>(it - modes.begin())));
    pair.push(Json::integer(count));
    entries.push(std::move(pair));
  }
  return entries;
}

using nlohmann::json;

ModeId mode_from_json(const json& j) {
  const std::string party = j.at("party").get<std::string>();
  if (party != "A" && party != "B") throw ValidationError("mode party must be \"A\" or \"B\"");
  ModeId m;
  m.party = party == "A" ? Party::A : Party::B;
  m.field_tag = j.at("field_tag").get<int>();
  m.index = j.at("index").get<int>();
  return m;
}

Occupation occupation_from_json(const json& j, const std::vector<ModeId>& modes) {
  std::vector<std::pair<ModeId, int>> counts;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2)
      throw ValidationError("occupation entries must be [mode_index, count] pairs");
    const auto position = entry[0].get<std::size_t>();
    if (position >= modes.size()) throw ValidationError("occupation mode index out of range");
    counts.emplace_back(modes[position], entry[1].get<int>());
  }
  return Occupation(std::move(counts));
}

}  // namespace

std::string state_to_json(const FieldState& s) {
  Json root = Json::object();
  root.set("format", Json::string("fockbell-state"));
  root.set("version", Json::integer(1));
  root.set("statistics",
           Json::string(s.statistics() == FieldStatistics::Boson ? "boson" : "fermion"));
  Json truncation = Json::object();
  truncation.set("max_quanta_per_side", Json::integer(s.truncation().max_quanta_per_side));
  truncation.set("amplitude_floor", Json::number(s.truncation().amplitude_floor));
  root.set("truncation", std::move(truncation));

  Json partition = Json::object();
  Json a_modes = Json::array();
  for (const auto& m : s.partition().a_modes()) a_modes.push(mode_to_json(m));
  Json b_modes = Json::array();
  for (const auto& m : s.partition().b_modes()) b_modes.push(mode_to_json(m));
  partition.set("a_modes", std::move(a_modes));
  partition.set("b_modes", std::move(b_modes));
  root.set("partition", std::move(partition));

  root.set("pruned_weight", Json::number(s.pruned_weight()));

  Json amplitudes = Json::array();
  for (const auto& [key, amp] : s.amplitudes()) {
    Json record = Json::object();
    record.set("a_occ", occupation_to_json(key.a_occ, s.partition().a_modes()));
    record.set("b_occ", occupation_to_json(key.b_occ, s.partition().b_modes()));
    record.set("re", Json::number(amp.real()));
    record.set("im", Json::number(amp.imag()));
    amplitudes.push(std::move(record));
  }
  root.set("amplitudes", std::move(amplitudes));
  return root.dump();
}

FieldState state_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("state file is not valid JSON: ") + e.what());
  }
  try {
    if (root.at("format").get<std::string>() != "fockbell-state")
      throw ValidationError("unrecognized state file format");
    if (root.at("version").get<int>() != 1) throw ValidationError("unsupported state file version");

    const std::string stats_name = root.at("statistics").get<std::string>();
    if (stats_name != "boson" && stats_name != "fermion")
      throw ValidationError("statistics must be \"boson\" or \"fermion\"");
    const FieldStatistics stats =
        stats_name == "boson" ? FieldStatistics::Boson : FieldStatistics::Fermion;

    TruncationPolicy truncation;
    truncation.max_quanta_per_side = root.at("truncation").at("max_quanta_per_side").get<int>();
    truncation.amplitude_floor = root.at("truncation").at("amplitude_floor").get<double>();
    if (truncation.max_quanta_per_side < 0 || truncation.amplitude_floor < 0.0)
      throw ValidationError("invalid truncation policy");

    std::vector<ModeId> a_modes, b_modes;
    for (const auto& m : root.at("partition").at("a_modes")) a_modes.push_back(mode_from_json(m));
    for (const auto& m : root.at("partition").at("b_modes")) b_modes.push_back(mode_from_json(m));
    FieldState s(ModePartition(std::move(a_modes), std::move(b_modes)), stats, truncation);

    for (const auto& record : root.at("amplitudes")) {
      const BasisKey key{occupation_from_json(record.at("a_occ"), s.partition().a_modes()),
                         occupation_from_json(record.at("b_occ"), s.partition().b_modes())};
      s.add_amplitude(key, Complex{record.at("re").get<double>(), record.at("im").get<double>()});
    }
    if (root.contains("pruned_weight"))
      s.set_pruned_weight(root.at("pruned_weight").get<double>());
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed state file: ") + e.what());
  } catch (const StructuralError& e) {
    throw ValidationError(std::string("inconsistent state file: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << content;
}

}  // namespace fockbell
