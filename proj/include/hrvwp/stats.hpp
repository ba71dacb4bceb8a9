#pragma once

// Balanced fixed-effects two-way ANOVA with interaction, and the F
// distribution upper tail it reports p-values from.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace hrvwp {

/// Balanced R x C grid with K replicates per cell, stored (row, column, replicate)-major.
class FactorialData {
 public:
  FactorialData(std::size_t rows, std::size_t cols, std::size_t reps, std::vector<double> values);

  /// cells[r][c] holds the replicates of cell (r, c). Throws ValidationError
  /// if the grid is ragged or any cell has a different replicate count.
  static FactorialData from_cells(const std::vector<std::vector<std::vector<double>>>& cells);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t reps() const { return reps_; }
  double at(std::size_t r, std::size_t c, std::size_t k) const { return values_[(r * cols_ + c) * reps_ + k]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_, cols_, reps_;
  std::vector<double> values_;
};

struct SumsOfSquares {
  double columns = 0.0;
  double rows = 0.0;
  double interaction = 0.0;
  double error = 0.0;
  double total = 0.0;
};

/// SS from cell, margin and grand means. Needs K >= 2.
SumsOfSquares sums_of_squares(const FactorialData& data);

enum class AnovaSource { Columns, Rows, Interaction, Error, Total };

std::string_view to_string(AnovaSource s);

struct AnovaRow {
  AnovaSource source = AnovaSource::Total;
  double ss = 0.0;
  int df = 0;
  std::optional<double> ms;  ///< absent for Total
  std::optional<double> f;   ///< absent for Error and Total
  std::optional<double> p;   ///< absent for Error and Total

  friend bool operator==(const AnovaRow&, const AnovaRow&) = default;
};

/// Rows in the fixed order Columns, Rows, Interaction, Error, Total.
struct AnovaTable {
  std::array<AnovaRow, 5> rows;

  const AnovaRow& operator[](AnovaSource s) const { return rows[static_cast<std::size_t>(s)]; }
  AnovaRow& operator[](AnovaSource s) { return rows[static_cast<std::size_t>(s)]; }

  friend bool operator==(const AnovaTable&, const AnovaTable&) = default;
};

/// Fills df, MS = SS/df, F = MS/MS_error and p for an R x C x K design.
/// The SS total is kept as given. Throws DegenerateDataError if MS_error is 0.
AnovaTable anova_table_from_sums(const SumsOfSquares& ss, std::size_t rows, std::size_t cols, std::size_t reps);

/// Throws ValidationError for K < 2 and DegenerateDataError when the
/// within-cell variance vanishes.
AnovaTable anova_two_way(const FactorialData& data);

/// I_x(a, b) by continued fraction, evaluated on whichever side of the mean
/// converges faster.
double regularized_incomplete_beta(double x, double a, double b);

/// Pr(F_{df1, df2} > f) = I_{df2 / (df2 + df1 f)}(df2/2, df1/2).
double f_tail_probability(double f, int df1, int df2);

}  // namespace hrvwp
