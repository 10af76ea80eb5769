#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include "affvol/errors.hpp"

namespace affvol::cli {

// Shortest round-trip text for a double; identical bytes for identical values.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::string_view header) : out_(path, std::ios::binary) {
        if (!out_) throw Error("cannot write " + path.string());
        out_ << header << '\n';
    }

    template <class... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        (put(fields, first), ...);
        out_ << '\n';
    }

private:
    void sep(bool& first) {
        if (!first) out_ << ',';
        first = false;
    }
    void put(double v, bool& first) {
        sep(first);
        out_ << format_number(v);
    }
    void put(std::size_t v, bool& first) {
        sep(first);
        out_ << v;
    }
    void put(int v, bool& first) {
        sep(first);
        out_ << v;
    }
    void put(std::string_view v, bool& first) {
        sep(first);
        out_ << v;
    }
    void put(const char* v, bool& first) { put(std::string_view(v), first); }
    void put(const std::string& v, bool& first) { put(std::string_view(v), first); }

    std::ofstream out_;
};

}  // namespace affvol::cli
