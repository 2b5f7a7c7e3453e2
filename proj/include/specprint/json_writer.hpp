#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace specprint {

// Minimal streaming JSON emitter. Keys keep insertion order; doubles print
// with 6 significant digits; infinities print as the string "inf". Output is
// byte-stable across runs, which the report formats require.
class JsonWriter {
public:
    const std::string& str() const { return out_; }

    JsonWriter& begin_object() { open('{'); return *this; }
    JsonWriter& end_object() { out_ += '}'; fresh_ = false; return *this; }
    JsonWriter& begin_array() { open('['); return *this; }
    JsonWriter& end_array() { out_ += ']'; fresh_ = false; return *this; }

    JsonWriter& key(const std::string& k) {
        comma();
        append_string(k);
        out_ += ':';
        fresh_ = true;
        return *this;
    }

    JsonWriter& value(const std::string& s) { comma(); append_string(s); return *this; }
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& value(bool b) { comma(); out_ += b ? "true" : "false"; return *this; }
    JsonWriter& value(int v) { comma(); out_ += std::to_string(v); return *this; }
    JsonWriter& value(long v) { comma(); out_ += std::to_string(v); return *this; }
    JsonWriter& value(std::size_t v) { comma(); out_ += std::to_string(v); return *this; }
    JsonWriter& value_null() { comma(); out_ += "null"; return *this; }

    JsonWriter& value(double v) {
        if (std::isinf(v)) return value(v > 0 ? "inf" : "-inf");
        if (std::isnan(v)) return value("nan");
        comma();
        out_ += format_double(v);
        return *this;
    }

    static std::string format_double(double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return buf;
    }

private:
    void open(char c) { comma(); out_ += c; fresh_ = true; }

    void comma() {
        if (!fresh_ && !out_.empty()) {
            const char last = out_.back();
            if (last != '{' && last != '[' && last != ':') out_ += ',';
        }
        fresh_ = false;
    }

    void append_string(const std::string& s) {
        out_ += '"';
        for (char ch : s) {
            switch (ch) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(ch) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                        out_ += buf;
                    } else {
                        out_ += ch;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    bool fresh_ = true;
};

}  // namespace specprint
