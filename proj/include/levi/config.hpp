#pragma once

/** \file config.hpp
 *  \brief Run configuration: a JSON document naming the group, coefficient
 *         preset, modulus, quadrature, series policy, evaluation grids and
 *         oracle settings, with schema validation and factory helpers; plus
 *         an RFC-4180 CSV writer used by every exporter.
 */

#include "levi/cauchy.hpp"
#include "levi/coefficient_field.hpp"
#include "levi/engine.hpp"
#include "levi/group.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace levi {

/// Modulus selection: a named kind with parameters, or a CSV table of
/// (r, omega) samples validated for monotonicity.  Kind "preset" keeps the
/// modulus the coefficient preset ships with.
struct ModulusSpec {
    std::string kind = "preset"; ///< preset | holder | log_dini | table
    double beta = 0.5;
    double alpha = 3.0;
    double scale = 1.0;
    std::string table_csv; ///< path of the sample file for kind "table"

    Modulus build() const; ///< throws for kind "preset" (nothing to build)
};

struct RunConfig {
    std::string group = "euclidean:1";

    std::string coeff = "sine"; ///< constant | sine | rotating2d | log_dini | holder
    double amp = 0.25;   ///< sine amplitude / rotating2d eps
    double kappa = 0.5;  ///< modulated-preset magnitude
    double alpha = 3.0;  ///< log-modulus exponent
    double beta = 0.5;   ///< Hoelder exponent
    double Lambda = 2.0; ///< ellipticity parameter for the constant preset

    ModulusSpec modulus;

    QuadratureSpec quad;
    SeriesPolicy policy;
    double T = 0.25;

    // Evaluation grid for the kernel/Cauchy exports: first-layer coordinates
    // sweep [-half_width, half_width] with nx nodes per axis, times are the
    // nt values j * T / nt, j = 1..nt.
    double grid_half_width = 2.0;
    int grid_nx = 21;
    int grid_nt = 8;

    Vec pole_x;          ///< defaults to the group identity
    double pole_t = 0.0;

    CauchyGrid cauchy;
    std::string initial = "cos";  ///< one | cos | gaussian | bump | none
    std::string source = "none";  ///< none | constant:<v> | coscos

    // Oracle settings.
    int fd_nx = 801;
    int fd_nt = 600;
    double fd_L = 8.0;
    std::vector<double> compare_dts = {0.05, 0.1, 0.2};
    double compare_tol = 0.02;
    std::size_t mc_paths = 20000;
    int mc_steps = 200;
    double mc_sigmas = 3.0; ///< acceptance band in standard errors

    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::vector<std::string> suite_ids; ///< empty selects every estimate

    /// Parse and validate; throws std::runtime_error with a field-qualified
    /// message on schema violations or unknown keys.
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);

    Group make_group() const;
    CoefficientField make_field() const; ///< applies the modulus override
};

/// Named initial data for the Cauchy runs.
std::function<double(const Vec&)> named_initial(const std::string& name);
/// Named source terms ("constant:<v>" parses the value).
std::function<double(const Vec&, double)> named_source(const std::string& name);

/// Minimal RFC-4180 CSV emitter: mandatory header, '.' decimal separator,
/// fields quoted exactly when they contain a comma, quote or newline.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);
    void row(const std::vector<double>& values);

    static std::string escape(const std::string& field);
    /// Shortest round-trip decimal form of a double.
    static std::string num(double v);

private:
    std::ostream& os_;
    std::size_t width_ = 0;
    bool have_header_ = false;

    void emit(const std::vector<std::string>& fields);
};

/// Read a two-column (r, omega) CSV with a header; throws on ragged rows or
/// non-monotone samples.
void read_modulus_table(const std::string& path, std::vector<double>& r, std::vector<double>& w);

} // namespace levi
