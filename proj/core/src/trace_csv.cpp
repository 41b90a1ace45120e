#include "climbprint/trace_csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

namespace climbprint {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    std::ostringstream os;
    os << "trace csv line " << line_no << ": " << what;
    throw Error(ErrorCode::ParseError, os.str());
}

double parse_number(const std::string& field, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        fail(line_no, "bad number '" + field + "'");
    }
    return v;
}

}  // namespace

std::string trace_csv(const ControlTrace& trace) {
    std::string out;
    out.reserve(trace.records.size() * 140 + 128);
    out.append(kTraceCsvHeader);
    out.push_back('\n');
    char buf[320];
    for (const ControlRecord& r : trace.records) {
        std::snprintf(buf, sizeof(buf),
                      "%.9f,%s,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%d\n",
                      r.t_s, std::string(mode_name(r.mode)).c_str(), r.wheels.front_left,
                      r.wheels.front_right, r.wheels.rear_left, r.wheels.rear_right,
                      r.foot_angle_deg, r.clamp_gap_m, r.head_u_m, r.head_v_m,
                      r.extrusion_mm3s, r.extruding ? 1 : 0);
        out.append(buf);
    }
    return out;
}

ControlTrace parse_trace_csv(const std::string& text) {
    ControlTrace trace;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kTraceCsvHeader) {
                fail(line_no, "unexpected header '" + line + "'");
            }
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 12) {
            std::ostringstream os;
            os << "expected 12 fields, got " << fields.size();
            fail(line_no, os.str());
        }
        ControlRecord r;
        r.t_s = parse_number(fields[0], line_no);
        try {
            r.mode = mode_from_name(fields[1]);
        } catch (const Error&) {
            fail(line_no, "unknown mode '" + fields[1] + "'");
        }
        r.wheels.front_left = parse_number(fields[2], line_no);
        r.wheels.front_right = parse_number(fields[3], line_no);
        r.wheels.rear_left = parse_number(fields[4], line_no);
        r.wheels.rear_right = parse_number(fields[5], line_no);
        r.foot_angle_deg = parse_number(fields[6], line_no);
        r.clamp_gap_m = parse_number(fields[7], line_no);
        r.head_u_m = parse_number(fields[8], line_no);
        r.head_v_m = parse_number(fields[9], line_no);
        r.extrusion_mm3s = parse_number(fields[10], line_no);
        if (fields[11] == "0") {
            r.extruding = false;
        } else if (fields[11] == "1") {
            r.extruding = true;
        } else {
            fail(line_no, "extruding must be 0 or 1, got '" + fields[11] + "'");
        }
        trace.records.push_back(quantized(r));
    }
    if (!saw_header) {
        throw Error(ErrorCode::ParseError, "trace csv: empty input");
    }
    return trace;
}

}  // namespace climbprint
