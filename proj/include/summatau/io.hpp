#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace summatau {

/// Shortest decimal representation that round-trips to the same double
/// (std::to_chars, general format). Used for every float we emit so that
/// artifacts are byte-stable across runs.
std::string format_double(double v);

/// Minimal ordered JSON emitter. Field order is exactly the call order,
/// numbers go through format_double, strings are escaped per RFC 8259.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(std::uint64_t v);
    JsonWriter& value(int v);
    JsonWriter& value(bool v);
    JsonWriter& null();

    /// key + scalar in one step.
    template <typename T>
    JsonWriter& field(const std::string& k, const T& v) {
        key(k);
        return value(v);
    }

    std::string str() const { return out_; }

private:
    void pre_value();
    std::string out_;
    std::vector<bool> needs_comma_;
    bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

} // namespace summatau
