#include "summatau/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "summatau/io.hpp"

namespace summatau {

namespace {

class SpecScanner {
public:
    explicit SpecScanner(const std::string& text) : s_(text) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eof() {
        skip_ws();
        return pos_ >= s_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    std::size_t pos() {
        skip_ws();
        return pos_;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos_;
        auto head = [](unsigned char c) { return std::islower(c) || c == '_'; };
        auto tail = [](unsigned char c) { return std::islower(c) || std::isdigit(c) || c == '_'; };
        if (pos_ < s_.size() && head(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
            while (pos_ < s_.size() && tail(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ == start) throw ParseError("expected identifier", start);
        return s_.substr(start, pos_ - start);
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        const char* begin = s_.data() + start;
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("expected number", start);
        if (!std::isfinite(v)) throw ParseError("number out of range", start);
        pos_ = start + static_cast<std::size_t>(end - begin);
        return v;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace

SequenceSpec parse_spec(const std::string& text) {
    SpecScanner sc(text);
    SequenceSpec spec;
    spec.family = sc.ident();
    if (sc.peek() == '(') {
        sc.expect('(');
        if (sc.peek() != ')') {
            while (true) {
                const std::size_t name_pos = sc.pos();
                std::string name = sc.ident();
                sc.expect('=');
                const std::size_t value_pos = sc.pos();
                const double value = sc.number();
                if (name == "seed") {
                    if (value < 0 || value != std::floor(value))
                        throw ParseError("seed must be a non-negative integer", value_pos);
                    if (spec.seed) throw ParseError("duplicate seed", name_pos);
                    spec.seed = static_cast<std::uint64_t>(value);
                } else {
                    for (const auto& p : spec.params)
                        if (p.name == name) throw ParseError("duplicate parameter '" + name + "'", name_pos);
                    spec.params.push_back({std::move(name), value});
                }
                if (sc.peek() == ',') { sc.expect(','); continue; }
                break;
            }
        }
        sc.expect(')');
    }
    if (!sc.eof()) throw ParseError("unexpected trailing input", sc.pos());
    return spec;
}

std::string render_spec(const SequenceSpec& spec) {
    std::string out = spec.family;
    if (!spec.params.empty() || spec.seed) {
        out += '(';
        bool first = true;
        for (const auto& p : spec.params) {
            if (!first) out += ',';
            first = false;
            out += p.name;
            out += '=';
            out += format_double(p.value);
        }
        if (spec.seed) {
            if (!first) out += ',';
            out += "seed=";
            out += std::to_string(*spec.seed);
        }
        out += ')';
    }
    return out;
}

} // namespace summatau
