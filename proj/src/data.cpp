#include "cmq/data.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>

#include "cmq/errors.hpp"

namespace cmq {

std::string data_path(const std::string& name) {
    const char* env = std::getenv("CMQ_DATA_DIR");
    std::string dir = env && *env ? env : CMQ_DATA_DIR;
    return dir + "/" + name;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw BadInput(path + ": " + e.what());
    }
}

const nlohmann::json& bundled(const std::string& name) {
    static std::mutex mu;
    static std::map<std::string, nlohmann::json> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, load_json(data_path(name))).first;
    return it->second;
}

}  // namespace cmq
