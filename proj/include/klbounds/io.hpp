#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

// Serialization helpers shared by the CLI: numbers at 17 significant digits
// (round-trip exact for 64-bit floats), with +/-infinity rendered as the
// strings "inf" / "-inf" in both JSON and CSV.

namespace klbounds::io {

inline std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Minimal ordered JSON object writer. Field order is insertion order, so
/// emitted records are byte-stable across runs.
class JsonObject {
  public:
    JsonObject() : out_("{") {}

    JsonObject& field(std::string_view key, double v) {
        raw(key, std::isfinite(v) ? fmt_double(v) : "\"" + fmt_double(v) + "\"");
        return *this;
    }
    JsonObject& field(std::string_view key, long long v) {
        raw(key, std::to_string(v));
        return *this;
    }
    JsonObject& field(std::string_view key, int v) { return field(key, (long long)v); }
    JsonObject& field(std::string_view key, unsigned long long v) {
        raw(key, std::to_string(v));
        return *this;
    }
    JsonObject& field(std::string_view key, bool v) {
        raw(key, v ? "true" : "false");
        return *this;
    }
    JsonObject& field(std::string_view key, std::string_view v) {
        std::string quoted = "\"";
        for (char c : v) {
            if (c == '"' || c == '\\') quoted += '\\';
            quoted += c;
        }
        quoted += '"';
        raw(key, quoted);
        return *this;
    }
    JsonObject& field(std::string_view key, const char* v) {
        return field(key, std::string_view(v));
    }
    JsonObject& field_vector(std::string_view key, const std::vector<double>& v) {
        std::string arr = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) arr += ",";
            arr += std::isfinite(v[i]) ? fmt_double(v[i]) : "\"" + fmt_double(v[i]) + "\"";
        }
        arr += "]";
        raw(key, arr);
        return *this;
    }
    JsonObject& field_object(std::string_view key,
                             const std::vector<std::pair<std::string, double>>& kv) {
        JsonObject nested;
        for (const auto& [k, v] : kv) nested.field(k, v);
        raw(key, nested.str());
        return *this;
    }

    std::string str() const { return out_ + "}"; }

  private:
    void raw(std::string_view key, std::string_view value) {
        if (!first_) out_ += ",";
        first_ = false;
        out_ += "\"";
        out_ += key;
        out_ += "\":";
        out_ += value;
    }
    std::string out_;
    bool first_ = true;
};

inline std::string join_csv(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ",";
        row += cells[i];
    }
    return row;
}

}  // namespace klbounds::io
