#ifndef AAM_LP_FORMAT_HPP
#define AAM_LP_FORMAT_HPP

// CPLEX LP text format: writer and a reader for the same dialect.
// The objective lists every variable (zero coefficients included) so that
// variable order survives a round trip.

#include <cctype>
#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aam/errors.hpp"
#include "aam/ilp_model.hpp"

namespace aam {

namespace detail {

inline void write_terms(std::ostringstream& out, const std::vector<Term>& terms, const IlpModel& model,
                        std::size_t indent) {
    std::size_t width = indent;
    bool first = true;
    for (const auto& t : terms) {
        std::string s;
        if (t.coef < 0) s = first ? "-" : "- ";
        else if (!first) s = "+ ";
        const auto mag = t.coef < 0 ? -t.coef : t.coef;
        if (mag != 1) s += std::to_string(mag) + " ";
        s += model.variables[t.var].name;
        if (width + s.size() + 1 > 200) {
            out << "\n   ";
            width = 3;
        } else if (!first) {
            out << ' ';
            ++width;
        }
        out << s;
        width += s.size();
        first = false;
    }
}

} // namespace detail

inline std::string export_lp(const IlpModel& model) {
    std::ostringstream out;
    out << "\\ " << (model.name.empty() ? "model" : model.name) << "\n";
    out << "Minimize\n obj:";
    std::vector<Term> obj;
    for (int v = 0; v < static_cast<int>(model.variables.size()); ++v) obj.push_back({v, model.variables[v].objective});
    if (!obj.empty()) out << ' ';
    // Zero objective coefficients are written explicitly.
    std::size_t width = 6;
    for (std::size_t k = 0; k < obj.size(); ++k) {
        const auto c = obj[k].coef;
        std::string s = k == 0 ? (c < 0 ? "-" : "") : (c < 0 ? "- " : "+ ");
        const auto mag = c < 0 ? -c : c;
        if (mag != 1) s += std::to_string(mag) + " ";
        s += model.variables[obj[k].var].name;
        if (width + s.size() + 1 > 200) {
            out << "\n   ";
            width = 3;
        } else if (k) {
            out << ' ';
            ++width;
        }
        out << s;
        width += s.size();
    }
    out << "\nSubject To\n";
    for (const auto& c : model.constraints) {
        out << ' ' << c.name << ": ";
        if (c.terms.empty()) out << "0 " << (model.variables.empty() ? "x" : model.variables[0].name);
        else detail::write_terms(out, c.terms, model, c.name.size() + 3);
        out << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::GreaterEqual ? " >= " : " = ") << c.rhs << "\n";
    }
    out << "Bounds\n";
    for (const auto& v : model.variables)
        if (v.kind == VarKind::Integer) out << ' ' << v.name << " >= 0\n";
    out << "Generals\n";
    for (const auto& v : model.variables)
        if (v.kind == VarKind::Integer) out << ' ' << v.name << "\n";
    out << "Binaries\n";
    for (const auto& v : model.variables)
        if (v.kind == VarKind::Binary) out << ' ' << v.name << "\n";
    out << "End\n";
    return out.str();
}

namespace detail {

class LpReader {
    enum class Kw { Objective, Constraints, Bounds, Generals, Binaries, End };

public:
    explicit LpReader(std::string_view text) : text_(text) {}

    IlpModel read() {
        IlpModel model;
        if (!text_.empty() && text_[0] == '\\') {
            auto eol = text_.find('\n');
            auto head = text_.substr(1, eol == std::string_view::npos ? std::string_view::npos : eol - 1);
            while (!head.empty() && head.front() == ' ') head.remove_prefix(1);
            model.name = std::string(head);
        }
        tokenize();
        std::optional<Kw> section;
        std::size_t k = 0;
        auto var = [&](const std::string& name) {
            auto it = index_.find(name);
            if (it != index_.end()) return it->second;
            const int v = model.add_variable(name, VarKind::Integer);
            index_[name] = v;
            return v;
        };
        while (k < tokens_.size()) {
            if (auto s = section_of(k)) {
                section = s->first;
                k += s->second;
                continue;
            }
            const auto& tok = tokens_[k];
            if (!section) throw parse_error("expected Minimize", tok.offset);
            switch (*section) {
            case Kw::End: throw parse_error("text after End", tok.offset);
            case Kw::Objective: {
                if (k + 1 < tokens_.size() && tokens_[k + 1].text == ":") k += 2;
                auto terms = read_terms(k, var);
                for (const auto& t : terms) model.variables[t.var].objective += t.coef;
                break;
            }
            case Kw::Constraints: {
                std::string name = "r" + std::to_string(model.constraints.size());
                if (k + 1 < tokens_.size() && tokens_[k + 1].text == ":") {
                    name = tok.text;
                    k += 2;
                }
                auto terms = read_terms(k, var);
                if (k >= tokens_.size()) throw parse_error("constraint without comparator", text_.size());
                const auto& op = tokens_[k].text;
                Sense sense;
                if (op == "<=" || op == "=<" || op == "<") sense = Sense::LessEqual;
                else if (op == ">=" || op == "=>" || op == ">") sense = Sense::GreaterEqual;
                else if (op == "=") sense = Sense::Equal;
                else throw parse_error("expected comparator", tokens_[k].offset);
                ++k;
                bool neg = false;
                if (k < tokens_.size() && (tokens_[k].text == "-" || tokens_[k].text == "+")) neg = tokens_[k++].text == "-";
                if (k >= tokens_.size() || !is_number(tokens_[k].text)) throw parse_error("expected right-hand side", k < tokens_.size() ? tokens_[k].offset : text_.size());
                std::int64_t rhs = to_int(tokens_[k++]);
                model.constraints.push_back({name, merge(terms), sense, neg ? -rhs : rhs});
                break;
            }
            case Kw::Bounds: {
                // Only "x >= 0" is understood; it restates the default.
                if (k + 2 < tokens_.size() && tokens_[k + 1].text == ">=" && tokens_[k + 2].text == "0") {
                    var(tok.text);
                    k += 3;
                    break;
                }
                throw parse_error("unsupported bound", tok.offset);
            }
            case Kw::Generals:
            case Kw::Binaries: {
                const int v = var(tok.text);
                model.variables[v].kind = *section == Kw::Binaries ? VarKind::Binary : VarKind::Integer;
                ++k;
                break;
            }
            }
        }
        if (section != Kw::End) throw parse_error("missing End", text_.size());
        model.index_assignment();
        return model;
    }

private:
    struct Token {
        std::string text;
        std::size_t offset;
        bool line_start;
    };

    static std::string lower(std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    }

    static bool is_number(const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    }

    std::int64_t to_int(const Token& t) const {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) throw parse_error("bad integer", t.offset);
        return v;
    }

    void tokenize() {
        bool line_start = true;
        for (std::size_t i = 0; i < text_.size();) {
            const char c = text_[i];
            if (c == '\\') {
                while (i < text_.size() && text_[i] != '\n') ++i;
                continue;
            }
            if (c == '\n') {
                line_start = true;
                ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            const std::size_t start = i;
            if (c == '<' || c == '>' || c == '=') {
                ++i;
                if (i < text_.size() && (text_[i] == '=' || text_[i] == '<' || text_[i] == '>')) ++i;
            } else if (c == '+' || c == '-' || c == ':') {
                ++i;
            } else {
                while (i < text_.size() && !std::isspace(static_cast<unsigned char>(text_[i])) &&
                       std::string_view("+-:<>=\\").find(text_[i]) == std::string_view::npos)
                    ++i;
            }
            tokens_.push_back({std::string(text_.substr(start, i - start)), start, line_start});
            line_start = false;
        }
    }

    std::vector<Term> merge(std::vector<Term> terms) const {
        std::vector<Term> out;
        for (const auto& t : terms) {
            auto it = std::find_if(out.begin(), out.end(), [&](const Term& o) { return o.var == t.var; });
            if (it == out.end()) out.push_back(t);
            else it->coef += t.coef;
        }
        std::erase_if(out, [](const Term& t) { return t.coef == 0; });
        return out;
    }

    template <class F>
    std::vector<Term> read_terms(std::size_t& k, F&& var) {
        std::vector<Term> terms;
        while (k < tokens_.size()) {
            const auto& t = tokens_[k];
            if (t.text == "<=" || t.text == ">=" || t.text == "=" || t.text == "=<" || t.text == "=>" || t.text == "<" ||
                t.text == ">")
                break;
            if (t.line_start && is_section(k)) break;
            if (k + 1 < tokens_.size() && tokens_[k + 1].text == ":" && t.line_start) break;
            std::int64_t sign = 1;
            while (k < tokens_.size() && (tokens_[k].text == "+" || tokens_[k].text == "-")) {
                if (tokens_[k].text == "-") sign = -sign;
                ++k;
            }
            if (k >= tokens_.size()) throw parse_error("dangling sign", text_.size());
            std::int64_t coef = 1;
            if (is_number(tokens_[k].text)) {
                coef = to_int(tokens_[k]);
                ++k;
                if (k >= tokens_.size()) throw parse_error("coefficient without variable", text_.size());
            }
            const auto& name = tokens_[k];
            if (!std::isalpha(static_cast<unsigned char>(name.text[0])) && name.text[0] != '_')
                throw parse_error("expected variable name", name.offset);
            terms.push_back({var(name.text), sign * coef});
            ++k;
        }
        return terms;
    }

    bool is_section(std::size_t k) const { return section_of(k).has_value(); }

    // Section keyword starting at token k (only at line start) and its token count.
    std::optional<std::pair<Kw, std::size_t>> section_of(std::size_t k) const {
        if (!tokens_[k].line_start) return std::nullopt;
        const auto t = lower(tokens_[k].text);
        if (t == "minimize" || t == "minimise" || t == "min") return std::pair{Kw::Objective, std::size_t{1}};
        if (t == "subject" && k + 1 < tokens_.size() && lower(tokens_[k + 1].text) == "to")
            return std::pair{Kw::Constraints, std::size_t{2}};
        if (t == "st" || t == "s.t.") return std::pair{Kw::Constraints, std::size_t{1}};
        if (t == "bounds" || t == "bound") return std::pair{Kw::Bounds, std::size_t{1}};
        if (t == "generals" || t == "general" || t == "gen") return std::pair{Kw::Generals, std::size_t{1}};
        if (t == "binaries" || t == "binary" || t == "bin") return std::pair{Kw::Binaries, std::size_t{1}};
        if (t == "end") return std::pair{Kw::End, std::size_t{1}};
        return std::nullopt;
    }

    std::string_view text_;
    std::vector<Token> tokens_;
    std::unordered_map<std::string, int> index_;
};

} // namespace detail

/// Parses the LP dialect written by export_lp.
inline IlpModel parse_lp(std::string_view text) { return detail::LpReader(text).read(); }

} // namespace aam

#endif
