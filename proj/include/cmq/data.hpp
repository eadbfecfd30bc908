#pragma once

#include <string>

#include <json.hpp>

namespace cmq {

// Location of a bundled data file; the CMQ_DATA_DIR environment variable
// overrides the directory chosen at build time.
std::string data_path(const std::string& name);
nlohmann::json load_json(const std::string& path);
const nlohmann::json& bundled(const std::string& name);

}  // namespace cmq
