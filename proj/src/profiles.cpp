#include "softbandit/profiles.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "softbandit/errors.hpp"

namespace softbandit {
namespace {

using json = nlohmann::json;

[[noreturn]] void record_error(std::size_t index, const std::string& message) {
  throw DataError("profile record " + std::to_string(index) + ": " + message);
}

std::string required_string(const json& obj, const char* key, std::size_t index,
                            const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    record_error(index, where + "\"" + key + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

std::vector<UserProfile> parse_profiles(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("profile file: parse error: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("profile file: expected a JSON array of records");

  std::vector<UserProfile> profiles;
  profiles.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& rec = doc[i];
    if (!rec.is_object()) record_error(i, "expected an object");
    UserProfile profile;
    profile.id = required_string(rec, "id", i, "field ");
    if (profile.id.empty()) record_error(i, "field \"id\" must be non-empty");
    if (const auto p = rec.find("persona"); p != rec.end() && !p->is_null()) {
      if (!p->is_string()) record_error(i, "field \"persona\" must be a string");
      profile.persona = p->get<std::string>();
    }
    const auto ex = rec.find("examples");
    if (ex == rec.end() || !ex->is_array())
      record_error(i, "field \"examples\" must be an array");
    if (ex->empty()) record_error(i, "field \"examples\" must not be empty");
    for (std::size_t k = 0; k < ex->size(); ++k) {
      const json& item = (*ex)[k];
      const std::string where = "examples[" + std::to_string(k) + "] field ";
      if (!item.is_object()) record_error(i, "examples[" + std::to_string(k) + "] must be an object");
      profile.examples.push_back(ProfileExample{required_string(item, "input", i, where),
                                                required_string(item, "gold", i, where)});
    }
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

std::vector<UserProfile> load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("profile file: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_profiles(buffer.str());
}

std::string serialize_profiles(const std::vector<UserProfile>& profiles) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& p : profiles) {
    nlohmann::ordered_json rec;
    rec["id"] = p.id;
    if (!p.persona.empty()) rec["persona"] = p.persona;
    rec["examples"] = nlohmann::ordered_json::array();
    for (const auto& e : p.examples) rec["examples"].push_back({{"input", e.input}, {"gold", e.gold}});
    doc.push_back(std::move(rec));
  }
  return doc.dump(2);
}

void save_profiles(const std::filesystem::path& path, const std::vector<UserProfile>& profiles) {
  std::ofstream out(path);
  if (!out) throw DataError("profile file: cannot write " + path.string());
  out << serialize_profiles(profiles) << '\n';
}

}  // namespace softbandit
