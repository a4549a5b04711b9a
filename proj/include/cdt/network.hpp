#pragma once

#include <Eigen/Core>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdt/params.hpp"

#include <json.hpp>

namespace cdt {

/// A complex: species identifier -> stoichiometric coefficient (>= 1).
/// The empty map is the zero complex "0".
using Complex = std::map<std::string, int>;

/// Total molecularity (sum of coefficients) of a complex.
int molecularity(const Complex& c);

struct Reaction {
    Complex reactant;
    Complex product;
    std::string rate_symbol;

    friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// A reaction network: an ordered species list plus an ordered reaction list.
/// Every species mentioned in a complex appears in the species list, species
/// identifiers are unique, and no reaction has reactant == product.
class ReactionNetwork {
  public:
    ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions);

    const std::vector<std::string>& species() const { return species_; }
    const std::vector<Reaction>& reactions() const { return reactions_; }
    int species_count() const { return static_cast<int>(species_.size()); }
    int reaction_count() const { return static_cast<int>(reactions_.size()); }
    int species_index(const std::string& name) const;  // throws on unknown species

  private:
    std::vector<std::string> species_;
    std::vector<Reaction> reactions_;
};

/// Structural equality: same species set (order is presentation only) and
/// identical reaction sequences.
bool operator==(const ReactionNetwork& a, const ReactionNetwork& b);
inline bool operator!=(const ReactionNetwork& a, const ReactionNetwork& b) { return !(a == b); }

struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string& what);
    int line;    // 1-based
    int column;  // 1-based
};

/// Parse the line-oriented network DSL:
///
///   complex -> complex @ symbol
///
/// where a complex is `+`-separated `[int] ident` terms or `0`, and `#`
/// starts a comment. Species are recorded in first-appearance order.
/// Complexes with molecularity > 2 are legal; a note is appended to
/// `warnings` when provided.
ReactionNetwork parse_network(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Canonical form: one reaction per line, single spaces, unit coefficients
/// omitted, `0` for the empty complex. parse_network(pretty_print(n)) == n.
std::string pretty_print(const ReactionNetwork& net);

nlohmann::json to_json(const ReactionNetwork& net);

/// Net-change matrix, species x reactions: product minus reactant coefficient.
Eigen::MatrixXi stoichiometric_matrix(const ReactionNetwork& net);

/// Rank of the stoichiometric matrix over the rationals, computed in exact
/// integer arithmetic (fraction-free Gaussian elimination).
int network_rank(const ReactionNetwork& net);

/// True iff every reactant and product complex has molecularity <= 2.
bool is_bimolecular(const ReactionNetwork& net);

/// Mass-action right-hand side:
///   xdot_s = sum_r kappa_r * netchange(s,r) * prod_u x_u^{reactant coeff}
/// Terms are accumulated in reaction order with the monomial built in species
/// order, so repeated evaluations are bitwise reproducible.
Eigen::VectorXd mass_action_rhs(const ReactionNetwork& net, const SystemParams& params,
                                const Eigen::VectorXd& state);

/// Compiled form of mass_action_rhs for use in integration loops.
class MassActionSystem {
  public:
    MassActionSystem(const ReactionNetwork& net, const SystemParams& params);

    Eigen::VectorXd operator()(const Eigen::VectorXd& state) const;
    int dimension() const { return dim_; }

  private:
    struct CompiledReaction {
        std::vector<int> factors;               // state indices, one per reactant unit
        std::vector<std::pair<int, double>> terms;  // (species, kappa * netchange)
    };
    int dim_;
    std::vector<CompiledReaction> reactions_;
};

enum class Builtin { paper4, paper4_variant, lotka, ivanova, symmetric9 };

ReactionNetwork builtin(Builtin which);
ReactionNetwork builtin(std::string_view name);  // throws std::invalid_argument on unknown name
std::vector<std::string> builtin_names();

}  // namespace cdt
