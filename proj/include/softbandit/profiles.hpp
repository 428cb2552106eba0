#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace softbandit {

struct ProfileExample {
  std::string input;
  std::string gold;

  bool operator==(const ProfileExample&) const = default;
};

struct UserProfile {
  std::string id;
  std::string persona;
  std::vector<ProfileExample> examples;

  bool operator==(const UserProfile&) const = default;
};

// Parses a JSON array of {"id", "persona"?, "examples": [{"input", "gold"}]}.
// Throws DataError naming the record index and field.
std::vector<UserProfile> parse_profiles(std::string_view document);
std::vector<UserProfile> load_profiles(const std::filesystem::path& path);

std::string serialize_profiles(const std::vector<UserProfile>& profiles);
void save_profiles(const std::filesystem::path& path,
                   const std::vector<UserProfile>& profiles);

}  // namespace softbandit
