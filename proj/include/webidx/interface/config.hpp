#pragma once

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "webidx/error.hpp"
#include "webidx/pipeline.hpp"

namespace webidx {

/// Reads an environment variable; returns nullptr when unset.
using EnvLookup = std::function<const char*(const char*)>;

namespace detail {

template <class T>
T yaml_value(const YAML::Node& node, const std::string& key)
{
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config key " + key + " has the wrong type");
    }
}

template <class T>
T positive(const YAML::Node& node, const std::string& key)
{
    const auto v = yaml_value<long long>(node, key);
    if (v <= 0) {
        throw ConfigError("config key " + key + " must be positive");
    }
    return static_cast<T>(v);
}

inline void apply_remote(const YAML::Node& node, RemoteConfig& cfg)
{
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto& v = kv.second;
        if (key == "endpoint") {
            cfg.endpoint = yaml_value<std::string>(v, "remote.endpoint");
        } else if (key == "api_key") {
            cfg.api_key = yaml_value<std::string>(v, "remote.api_key");
        } else if (key == "model") {
            cfg.model = yaml_value<std::string>(v, "remote.model");
        } else if (key == "timeout_seconds") {
            cfg.timeout_seconds = positive<int>(v, "remote.timeout_seconds");
        } else if (key == "retries") {
            cfg.retries = positive<int>(v, "remote.retries");
        } else {
            throw ConfigError("unknown config key remote." + key);
        }
    }
}

inline void apply_service(const YAML::Node& node, ServiceConfig& cfg)
{
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto& v = kv.second;
        if (key == "host") {
            cfg.host = yaml_value<std::string>(v, "service.host");
        } else if (key == "port") {
            cfg.port = positive<int>(v, "service.port");
        } else if (key == "max_body_bytes") {
            cfg.max_body_bytes = positive<std::size_t>(v, "service.max_body_bytes");
        } else if (key == "workers") {
            cfg.workers = positive<int>(v, "service.workers");
        } else {
            throw ConfigError("unknown config key service." + key);
        }
    }
}

}  // namespace detail

/// Overlays the keys present in a YAML document onto `cfg`. Unknown keys
/// are rejected so typos do not pass silently.
inline void apply_config_yaml(const std::string& text, PipelineConfig& cfg)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    if (root.IsNull()) {
        return;
    }
    if (!root.IsMap()) {
        throw ConfigError("config must be a mapping");
    }
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        const auto& v = kv.second;
        if (key == "max_doc_tokens") {
            cfg.max_doc_tokens = detail::positive<std::size_t>(v, key);
        } else if (key == "prompt_margin") {
            cfg.prompt_margin = detail::positive<std::size_t>(v, key);
        } else if (key == "max_block_chars") {
            cfg.segmenter.max_block_chars = detail::positive<std::size_t>(v, key);
        } else if (key == "concurrency") {
            cfg.concurrency = detail::positive<int>(v, key);
        } else if (key == "backend") {
            const auto name = detail::yaml_value<std::string>(v, key);
            const auto kind = parse_backend_kind(name);
            if (!kind) {
                throw ConfigError("unknown backend " + name);
            }
            cfg.backend = *kind;
        } else if (key == "format") {
            const auto name = detail::yaml_value<std::string>(v, key);
            const auto f = parse_format(name);
            if (!f) {
                throw ConfigError("unknown format " + name);
            }
            cfg.format = *f;
        } else if (key == "prompt_path") {
            cfg.prompt_path = detail::yaml_value<std::string>(v, key);
        } else if (key == "scripted_reply") {
            cfg.scripted_reply = detail::yaml_value<std::string>(v, key);
        } else if (key == "remote" || key == "service") {
            if (!v.IsMap()) {
                throw ConfigError("config key " + key + " must be a mapping");
            }
            if (key == "remote") {
                detail::apply_remote(v, cfg.remote);
            } else {
                detail::apply_service(v, cfg.service);
            }
        } else {
            throw ConfigError("unknown config key " + key);
        }
    }
}

inline void load_config_file(const std::string& path, PipelineConfig& cfg)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_yaml(ss.str(), cfg);
}

/// EXTRACTOR_ENDPOINT, EXTRACTOR_API_KEY and EXTRACTOR_MODEL override the
/// remote section; empty values are ignored.
inline void apply_env(PipelineConfig& cfg, const EnvLookup& env = [](const char* k) { return std::getenv(k); })
{
    auto take = [&](const char* name, std::string& field) {
        const char* v = env(name);
        if (v != nullptr && *v != '\0') {
            field = v;
        }
    };
    take("EXTRACTOR_ENDPOINT", cfg.remote.endpoint);
    take("EXTRACTOR_API_KEY", cfg.remote.api_key);
    take("EXTRACTOR_MODEL", cfg.remote.model);
}

}  // namespace webidx
