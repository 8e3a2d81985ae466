#include "aafix/certificate_io.hpp"

#include "aafix/path_csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace aafix {

namespace {

constexpr const char* kSep = " ;; ";

struct NamedConstant {
    const char* name;
    EnvelopeValue EnvelopeConstants::*member;
};

constexpr NamedConstant kConstants[] = {
    {"alpha1", &EnvelopeConstants::alpha1}, {"alpha2", &EnvelopeConstants::alpha2},
    {"N1", &EnvelopeConstants::N1},         {"N2", &EnvelopeConstants::N2},
    {"beta1_H5", &EnvelopeConstants::beta1_H5}, {"beta2_H5", &EnvelopeConstants::beta2_H5},
    {"P1", &EnvelopeConstants::P1},         {"P2", &EnvelopeConstants::P2},
    {"Q1", &EnvelopeConstants::Q1},         {"gamma1", &EnvelopeConstants::gamma1},
    {"gamma2", &EnvelopeConstants::gamma2}, {"C_B", &EnvelopeConstants::C_B},
};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    for (;;) {
        const auto hit = s.find(sep, pos);
        out.push_back(s.substr(pos, hit == std::string::npos ? std::string::npos : hit - pos));
        if (hit == std::string::npos) break;
        pos = hit + sep.size();
    }
    return out;
}

std::string after(const std::string& field, const std::string& prefix) {
    if (field.rfind(prefix, 0) != 0) throw Error("certificate: expected '" + prefix + "' in '" + field + "'");
    return field.substr(prefix.size());
}

EnvelopeValue parse_constant(const std::string& text) {
    EnvelopeValue v;
    const auto note_at = text.find(" note=");
    std::istringstream in(note_at == std::string::npos ? text : text.substr(0, note_at));
    if (note_at != std::string::npos) v.note = text.substr(note_at + 6);
    std::string tok;
    in >> tok;
    v.value = parse_double(tok);
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw Error("certificate: bad constant field '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "argmax") v.argmax = parse_double(val);
        else if (key == "points") v.grid_points = static_cast<std::size_t>(parse_double(val));
        else if (key == "grid_min") v.grid_min = parse_double(val);
        else if (key == "grid_max") v.grid_max = parse_double(val);
        else if (key == "tol") v.tol = parse_double(val);
        else if (key == "computed") v.computed = val == "yes";
        else throw Error("certificate: unknown constant field '" + key + "'");
    }
    return v;
}

}  // namespace

void write_certificate(std::ostream& out, const ContractionCertificate& c) {
    out << "certificate: " << to_string(c.theorem) << '\n';
    out << "problem: " << c.problem << '\n';
    out << "variant: " << to_string(c.variant) << '\n';
    out << "verdict: " << to_string(c.verdict) << '\n';
    out << "contraction: " << format_double(c.contraction) << '\n';
    out << "rho: " << format_double(c.rho) << '\n';
    out << "base_norm: " << format_double(c.base_norm) << '\n';
    if (c.theta) out << "theta: " << format_double(*c.theta) << '\n';
    if (c.xi0) out << "xi0: " << format_double(*c.xi0) << '\n';
    if (c.witness_radius) out << "witness_radius: " << format_double(*c.witness_radius) << '\n';
    if (c.step_norm) out << "step_norm: " << format_double(*c.step_norm) << '\n';
    out << "slack_margin: " << format_double(c.slack_margin) << '\n';
    if (!c.violated.empty()) out << "violated: " << c.violated << '\n';
    for (const auto& [k, v] : c.inputs) out << "input." << k << ": " << format_double(v) << '\n';
    for (const auto& nc : kConstants) {
        const EnvelopeValue& v = c.constants.*(nc.member);
        if (!v.computed) continue;
        out << "constant." << nc.name << ": " << format_double(v.value) << " argmax=" << format_double(v.argmax)
            << " points=" << v.grid_points << " grid_min=" << format_double(v.grid_min)
            << " grid_max=" << format_double(v.grid_max) << " tol=" << format_double(v.tol)
            << " computed=yes";
        if (!v.note.empty()) out << " note=" << v.note;
        out << '\n';
    }
    for (const auto& k : c.audit) {
        out << "check: " << k.name << kSep << k.expression << kSep << "lhs=" << format_double(k.lhs) << kSep
            << "rhs=" << format_double(k.rhs) << kSep << "slack=" << format_double(k.slack) << kSep
            << (k.strict ? "strict" : "non-strict") << kSep << (k.holds ? "holds" : "violated") << '\n';
    }
    for (const auto& n : c.notes) out << "note: " << n << '\n';
}

std::string certificate_to_string(const ContractionCertificate& c) {
    std::ostringstream os;
    write_certificate(os, c);
    return os.str();
}

ContractionCertificate read_certificate(std::istream& in) {
    ContractionCertificate c;
    bool have_id = false, have_verdict = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || trim(line).front() == '#') continue;
        const auto colon = line.find(": ");
        if (colon == std::string::npos) throw Error("certificate line " + std::to_string(lineno) + ": missing ': '");
        const std::string key = trim(line.substr(0, colon));
        const std::string val = trim(line.substr(colon + 2));
        try {
            if (key == "certificate") {
                c.theorem = theorem_from_string(val);
                have_id = true;
            } else if (key == "problem") c.problem = val;
            else if (key == "variant") c.variant = variant_from_string(val);
            else if (key == "verdict") {
                c.verdict = verdict_from_string(val);
                have_verdict = true;
            } else if (key == "contraction") c.contraction = parse_double(val);
            else if (key == "rho") c.rho = parse_double(val);
            else if (key == "base_norm") c.base_norm = parse_double(val);
            else if (key == "theta") c.theta = parse_double(val);
            else if (key == "xi0") c.xi0 = parse_double(val);
            else if (key == "witness_radius") c.witness_radius = parse_double(val);
            else if (key == "step_norm") c.step_norm = parse_double(val);
            else if (key == "slack_margin") c.slack_margin = parse_double(val);
            else if (key == "violated") c.violated = val;
            else if (key == "note") c.notes.push_back(val);
            else if (key.rfind("input.", 0) == 0) c.inputs[key.substr(6)] = parse_double(val);
            else if (key.rfind("constant.", 0) == 0) {
                const std::string name = key.substr(9);
                bool found = false;
                for (const auto& nc : kConstants) {
                    if (name == nc.name) {
                        c.constants.*(nc.member) = parse_constant(val);
                        found = true;
                    }
                }
                if (!found) throw Error("unknown constant '" + name + "'");
            } else if (key == "check") {
                const auto f = split(val, kSep);
                if (f.size() != 7) throw Error("check needs 7 fields");
                InequalityCheck k;
                k.name = f[0];
                k.expression = f[1];
                k.lhs = parse_double(after(f[2], "lhs="));
                k.rhs = parse_double(after(f[3], "rhs="));
                k.slack = parse_double(after(f[4], "slack="));
                k.strict = f[5] == "strict";
                k.holds = f[6] == "holds";
                c.audit.push_back(std::move(k));
            } else {
                throw Error("unknown key '" + key + "'");
            }
        } catch (const Error& e) {
            throw Error("certificate line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_id || !have_verdict) throw Error("certificate: missing 'certificate' or 'verdict' line");
    return c;
}

ContractionCertificate certificate_from_string(const std::string& text) {
    std::istringstream in(text);
    return read_certificate(in);
}

}  // namespace aafix
