#include "cdt/network.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace cdt {

int molecularity(const Complex& c) {
    int m = 0;
    for (const auto& [sp, coeff] : c) m += coeff;
    return m;
}

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions)
  : species_(std::move(species)), reactions_(std::move(reactions)) {
    std::set<std::string> seen;
    for (const auto& s : species_) {
        if (s.empty()) throw std::invalid_argument("empty species identifier");
        if (!seen.insert(s).second) throw std::invalid_argument("duplicate species: " + s);
    }
    for (const auto& r : reactions_) {
        if (r.reactant == r.product)
            throw std::invalid_argument("null reaction (reactant equals product) with rate " + r.rate_symbol);
        for (const Complex* c : {&r.reactant, &r.product}) {
            for (const auto& [sp, coeff] : *c) {
                if (coeff < 1) throw std::invalid_argument("nonpositive coefficient for species " + sp);
                if (!seen.count(sp)) throw std::invalid_argument("species not in species list: " + sp);
            }
        }
    }
}

int ReactionNetwork::species_index(const std::string& name) const {
    auto it = std::find(species_.begin(), species_.end(), name);
    if (it == species_.end()) throw std::invalid_argument("unknown species: " + name);
    return static_cast<int>(it - species_.begin());
}

bool operator==(const ReactionNetwork& a, const ReactionNetwork& b) {
    std::set<std::string> sa(a.species().begin(), a.species().end());
    std::set<std::string> sb(b.species().begin(), b.species().end());
    return sa == sb && a.reactions() == b.reactions();
}

ParseError::ParseError(int line, int column, const std::string& what)
  : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
    line(line),
    column(column) {}

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_blanks() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col, msg); }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string lex_ident(Cursor& cur) {
    size_t start = cur.pos;
    while (!cur.eof() && ident_char(cur.peek())) cur.advance();
    return std::string(cur.text.substr(start, cur.pos - start));
}

long lex_int(Cursor& cur) {
    long v = 0;
    size_t digits = 0;
    while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        v = v * 10 + (cur.peek() - '0');
        if (v > 1'000'000) cur.fail("coefficient too large");
        cur.advance();
        ++digits;
    }
    if (digits == 0) cur.fail("expected an integer");
    return v;
}

// complex := '0' | term ('+' term)*, term := [int] ident
Complex parse_complex(Cursor& cur, std::vector<std::string>& species_order, std::set<std::string>& known) {
    Complex result;
    while (true) {
        cur.skip_blanks();
        if (cur.eof()) cur.fail("unexpected end of input in complex");
        int coeff = 1;
        if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
            int cline = cur.line, ccol = cur.col;
            coeff = static_cast<int>(lex_int(cur));
            cur.skip_blanks();
            bool has_ident = !cur.eof() && ident_start(cur.peek());
            if (coeff == 0) {
                if (has_ident) throw ParseError(cline, ccol, "coefficient must be at least 1");
                if (!result.empty()) throw ParseError(cline, ccol, "'0' cannot be combined with other terms");
                return result;  // the zero complex
            }
            if (!has_ident) cur.fail("expected a species identifier after coefficient");
        }
        if (cur.eof() || !ident_start(cur.peek())) cur.fail("expected a species identifier");
        std::string name = lex_ident(cur);
        if (known.insert(name).second) species_order.push_back(name);
        result[name] += coeff;
        cur.skip_blanks();
        if (!cur.eof() && cur.peek() == '+') {
            cur.advance();
            continue;
        }
        return result;
    }
}

std::string complex_to_string(const Complex& c, const std::vector<std::string>& species) {
    if (c.empty()) return "0";
    std::string out;
    for (const auto& sp : species) {
        auto it = c.find(sp);
        if (it == c.end()) continue;
        if (!out.empty()) out += " + ";
        if (it->second != 1) out += std::to_string(it->second);
        out += sp;
    }
    return out;
}

}  // namespace

ReactionNetwork parse_network(std::string_view text, std::vector<std::string>* warnings) {
    Cursor cur{text};
    std::vector<std::string> species_order;
    std::set<std::string> known;
    std::vector<Reaction> reactions;

    while (!cur.eof()) {
        cur.skip_blanks();
        if (cur.eof()) break;
        if (cur.peek() == '\n') {
            cur.advance();
            continue;
        }
        if (cur.peek() == '#') {
            while (!cur.eof() && cur.peek() != '\n') cur.advance();
            continue;
        }
        int rline = cur.line, rcol = cur.col;
        Reaction r;
        r.reactant = parse_complex(cur, species_order, known);
        cur.skip_blanks();
        if (cur.eof() || cur.peek() != '-') cur.fail("expected '->'");
        cur.advance();
        if (cur.eof() || cur.peek() != '>') cur.fail("expected '->'");
        cur.advance();
        r.product = parse_complex(cur, species_order, known);
        cur.skip_blanks();
        if (cur.eof() || cur.peek() != '@') cur.fail("expected '@ rate-symbol'");
        cur.advance();
        cur.skip_blanks();
        if (cur.eof() || !ident_start(cur.peek())) cur.fail("expected a rate symbol");
        r.rate_symbol = lex_ident(cur);
        cur.skip_blanks();
        if (!cur.eof() && cur.peek() == '#') {
            while (!cur.eof() && cur.peek() != '\n') cur.advance();
        }
        if (!cur.eof()) {
            if (cur.peek() != '\n') cur.fail("unexpected trailing input after reaction");
            cur.advance();
        }
        if (r.reactant == r.product) throw ParseError(rline, rcol, "null reaction (reactant equals product)");
        if (warnings) {
            for (const Complex* c : {&r.reactant, &r.product}) {
                if (molecularity(*c) > 2) {
                    warnings->push_back("line " + std::to_string(rline) + ": complex '" +
                                        complex_to_string(*c, species_order) + "' has molecularity " +
                                        std::to_string(molecularity(*c)) + " (network is not bimolecular)");
                }
            }
        }
        reactions.push_back(std::move(r));
    }
    return ReactionNetwork(std::move(species_order), std::move(reactions));
}

std::string pretty_print(const ReactionNetwork& net) {
    std::string out;
    for (const auto& r : net.reactions()) {
        out += complex_to_string(r.reactant, net.species());
        out += " -> ";
        out += complex_to_string(r.product, net.species());
        out += " @ ";
        out += r.rate_symbol;
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const ReactionNetwork& net) {
    nlohmann::json j;
    j["species"] = net.species();
    j["reactions"] = nlohmann::json::array();
    for (const auto& r : net.reactions()) {
        nlohmann::json jr;
        jr["reactant"] = nlohmann::json::object();
        for (const auto& [sp, c] : r.reactant) jr["reactant"][sp] = c;
        jr["product"] = nlohmann::json::object();
        for (const auto& [sp, c] : r.product) jr["product"][sp] = c;
        jr["rate"] = r.rate_symbol;
        j["reactions"].push_back(jr);
    }
    return j;
}

Eigen::MatrixXi stoichiometric_matrix(const ReactionNetwork& net) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(net.species_count(), net.reaction_count());
    for (int r = 0; r < net.reaction_count(); ++r) {
        const Reaction& rx = net.reactions()[r];
        for (const auto& [sp, c] : rx.product) m(net.species_index(sp), r) += c;
        for (const auto& [sp, c] : rx.reactant) m(net.species_index(sp), r) -= c;
    }
    return m;
}

int network_rank(const ReactionNetwork& net) {
    // Bareiss fraction-free elimination over exact integers.
    Eigen::MatrixXi mi = stoichiometric_matrix(net);
    const int rows = static_cast<int>(mi.rows()), cols = static_cast<int>(mi.cols());
    std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a[i][j] = mi(i, j);

    int rank = 0;
    long long prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i) {
            if (a[i][col] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int i = rank + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

bool is_bimolecular(const ReactionNetwork& net) {
    for (const auto& r : net.reactions()) {
        if (molecularity(r.reactant) > 2 || molecularity(r.product) > 2) return false;
    }
    return true;
}

MassActionSystem::MassActionSystem(const ReactionNetwork& net, const SystemParams& params)
  : dim_(net.species_count()) {
    for (const auto& rx : net.reactions()) {
        CompiledReaction cr;
        const double kappa = params.at(rx.rate_symbol);
        // Monomial factors in species order; paired with the reactant
        // coefficients this fixes the rounding order once and for all.
        for (int s = 0; s < dim_; ++s) {
            auto it = rx.reactant.find(net.species()[s]);
            if (it == rx.reactant.end()) continue;
            for (int n = 0; n < it->second; ++n) cr.factors.push_back(s);
        }
        for (int s = 0; s < dim_; ++s) {
            const std::string& sp = net.species()[s];
            int net_change = 0;
            auto ip = rx.product.find(sp);
            if (ip != rx.product.end()) net_change += ip->second;
            auto ir = rx.reactant.find(sp);
            if (ir != rx.reactant.end()) net_change -= ir->second;
            if (net_change != 0) cr.terms.emplace_back(s, kappa * static_cast<double>(net_change));
        }
        reactions_.push_back(std::move(cr));
    }
}

Eigen::VectorXd MassActionSystem::operator()(const Eigen::VectorXd& state) const {
    if (state.size() != dim_) throw std::invalid_argument("state dimension mismatch");
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(dim_);
    for (const auto& cr : reactions_) {
        double monomial = 1.0;
        for (int idx : cr.factors) monomial *= state[idx];
        for (const auto& [s, coeff] : cr.terms) dx[s] += coeff * monomial;
    }
    return dx;
}

Eigen::VectorXd mass_action_rhs(const ReactionNetwork& net, const SystemParams& params,
                                const Eigen::VectorXd& state) {
    return MassActionSystem(net, params)(state);
}

namespace {

Complex cpx(std::initializer_list<std::pair<const char*, int>> terms) {
    Complex c;
    for (const auto& [sp, n] : terms) c[sp] = n;
    return c;
}

}  // namespace

ReactionNetwork builtin(Builtin which) {
    using R = Reaction;
    switch (which) {
        case Builtin::paper4:
            return ReactionNetwork({"X", "Y", "Z"},
                                   {R{cpx({{"Z", 1}, {"X", 1}}), cpx({{"X", 2}}), "k1"},
                                    R{cpx({{"X", 1}, {"Y", 1}}), cpx({{"Y", 2}}), "k2"},
                                    R{cpx({{"Y", 1}, {"Z", 1}}), cpx({}), "k3"},
                                    R{cpx({}), cpx({{"Z", 2}}), "k4"}});
        case Builtin::paper4_variant:
            return ReactionNetwork({"X", "Y", "Z"},
                                   {R{cpx({{"Z", 1}, {"X", 1}}), cpx({{"X", 2}}), "k1"},
                                    R{cpx({{"X", 1}, {"Y", 1}}), cpx({{"Y", 2}}), "k2"},
                                    R{cpx({{"Y", 1}, {"Z", 1}}), cpx({}), "k3"},
                                    R{cpx({}), cpx({{"Z", 1}}), "k4"}});
        case Builtin::lotka:
            return ReactionNetwork({"X", "Y"},
                                   {R{cpx({{"X", 1}}), cpx({{"X", 2}}), "k1"},
                                    R{cpx({{"X", 1}, {"Y", 1}}), cpx({{"Y", 2}}), "k2"},
                                    R{cpx({{"Y", 1}}), cpx({}), "k3"}});
        case Builtin::ivanova:
            return ReactionNetwork({"X", "Y", "Z"},
                                   {R{cpx({{"Z", 1}, {"X", 1}}), cpx({{"X", 2}}), "k1"},
                                    R{cpx({{"X", 1}, {"Y", 1}}), cpx({{"Y", 2}}), "k2"},
                                    R{cpx({{"Y", 1}, {"Z", 1}}), cpx({{"Z", 2}}), "k3"}});
        case Builtin::symmetric9: {
            std::vector<Reaction> rs;
            const char* triples[3][3] = {{"Z", "X", "X"}, {"X", "Y", "Y"}, {"Y", "Z", "Z"}};
            for (auto& t : triples) {
                rs.push_back(R{cpx({{t[0], 1}, {t[1], 1}}), cpx({{t[2], 1}}), "alpha"});
                rs.push_back(R{cpx({{t[2], 1}}), cpx({{t[2], 2}}), "gamma"});
                rs.push_back(R{cpx({{t[2], 2}}), cpx({{t[2], 1}}), "beta"});
            }
            return ReactionNetwork({"X", "Y", "Z"}, std::move(rs));
        }
    }
    throw std::invalid_argument("unknown builtin network");
}

ReactionNetwork builtin(std::string_view name) {
    if (name == "paper4") return builtin(Builtin::paper4);
    if (name == "paper4_variant") return builtin(Builtin::paper4_variant);
    if (name == "lotka") return builtin(Builtin::lotka);
    if (name == "ivanova") return builtin(Builtin::ivanova);
    if (name == "symmetric9") return builtin(Builtin::symmetric9);
    throw std::invalid_argument("unknown builtin network: " + std::string(name));
}

std::vector<std::string> builtin_names() {
    return {"paper4", "paper4_variant", "lotka", "ivanova", "symmetric9"};
}

}  // namespace cdt
