#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dcgate/pulse.hpp"

namespace dcgate {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits, scientific: round-trips exactly and keeps emitted
// documents and tables byte-stable.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

// Sequence document: {"label": <string>, "segments": [{"omega": <number>,
// "duration": <number>}, ...]}.
inline std::string emit_sequence(const PulseSequence& seq) {
    std::string out = "{\n  \"label\": " + nlohmann::json(seq.label).dump() +
                      ",\n  \"segments\": [";
    for (std::size_t i = 0; i < seq.segments.size(); ++i) {
        out += i == 0 ? "\n" : ",\n";
        out += "    { \"omega\": " + format_number(seq.segments[i].omega) +
               ", \"duration\": " + format_number(seq.segments[i].duration) + " }";
    }
    out += seq.segments.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

// Parses and normalizes a sequence document, so parse(emit(s)) == normalize(s).
inline PulseSequence parse_sequence(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid sequence document: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("document root must be an object");

    PulseSequence seq;
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) throw parse_error("field 'label' must be a string");
        seq.label = doc["label"].get<std::string>();
    }
    if (!doc.contains("segments") || !doc["segments"].is_array())
        throw parse_error("field 'segments' must be an array");

    std::size_t i = 0;
    for (const auto& item : doc["segments"]) {
        const std::string at = "segments[" + std::to_string(i) + "]";
        if (!item.is_object()) throw parse_error("field '" + at + "' must be an object");
        for (const char* key : {"omega", "duration"}) {
            if (!item.contains(key) || !item[key].is_number())
                throw parse_error("field '" + at + "." + key + "' must be a number");
        }
        PulseSegment seg{item["omega"].get<double>(), item["duration"].get<double>()};
        if (seg.duration < 0.0)
            throw validation_error("field '" + at + ".duration' must be >= 0");
        seq.segments.push_back(seg);
        ++i;
    }
    return normalize(seq);
}

}  // namespace dcgate
