#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "gamow/errors.hpp"
#include "gamow/types.hpp"

namespace gamow::report {

/// Fixed float formatting shared by every emitter: 17 significant digits,
/// '.' decimal separator regardless of locale, shortest general form.
inline std::string fmt(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x,
                             std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string fmt(int x) { return std::to_string(x); }
inline std::string fmt(long x) { return std::to_string(x); }
inline std::string fmt(std::size_t x) { return std::to_string(x); }

inline std::string json_escape(const std::string &s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(ch) < 0x20) {
                char esc[8];
                std::snprintf(esc, sizeof(esc), "\\u%04x", ch);
                out += esc;
            } else {
                out += ch;
            }
        }
    }
    return out;
}

/// Insertion-ordered JSON emission with the shared float format.  The vendor
/// JSON library parses; emission is hand-rolled so the 17-digit contract and
/// key order are under our control, not the library's dtoa.
class JsonWriter {
public:
    JsonWriter &key(const std::string &k) {
        sep();
        out_ += '"';
        out_ += json_escape(k);
        out_ += "\":";
        fresh_ = true;
        return *this;
    }
    JsonWriter &value(double v) { return raw(fmt(v)); }
    JsonWriter &value(int v) { return raw(std::to_string(v)); }
    JsonWriter &value(std::size_t v) { return raw(std::to_string(v)); }
    JsonWriter &value(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter &value(const std::string &v) { return raw('"' + json_escape(v) + '"'); }
    JsonWriter &value(const char *v) { return value(std::string(v)); }
    JsonWriter &value(cplx z) {
        begin_object();
        key("re").value(z.real());
        key("im").value(z.imag());
        return end_object();
    }
    JsonWriter &null() { return raw("null"); }

    JsonWriter &begin_object() { return open('{'); }
    JsonWriter &end_object() { return close('}'); }
    JsonWriter &begin_array() { return open('['); }
    JsonWriter &end_array() { return close(']'); }

    JsonWriter &raw(const std::string &r) {
        sep();
        out_ += r;
        return *this;
    }

    const std::string &str() const { return out_; }

private:
    JsonWriter &open(char c) {
        sep();
        out_ += c;
        fresh_ = true;
        return *this;
    }
    JsonWriter &close(char c) {
        out_ += c;
        fresh_ = false;
        return *this;
    }
    void sep() {
        if (!fresh_ && !out_.empty()) {
            const char last = out_.back();
            if (last != '{' && last != '[' && last != ':') out_ += ',';
        }
        fresh_ = false;
    }

    std::string out_;
    bool fresh_ = true;
};

/// CSV with a header row, comma separation, '\n' endings, no quoting.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) {
        join(header);
    }

    void row(const std::vector<std::string> &cells) { join(cells); }

    const std::string &str() const { return out_; }

private:
    void join(const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ += ',';
            out_ += cells[i];
        }
        out_ += '\n';
    }

    std::string out_;
};

/// Atomic file emission: write to a sibling temp file, then rename over the
/// target so readers never observe a half-written report.
inline void write_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw Error("cannot open for writing: " + tmp.string());
        os.write(content.data(), std::streamsize(content.size()));
        if (!os)
            throw Error("short write: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw Error("rename failed for " + target.string() + ": " + ec.message());
}

} // namespace gamow::report
