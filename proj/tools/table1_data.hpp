// Published reference values for mu = 1: -lambda and its three large-threshold
// approximations, rounded to 12 decimals. Trailing zeros dropped in print are
// restored here.
#pragma once

#include <array>

namespace qsdsr_tools {

struct Table1Row {
  double A;
  double neg_lambda;
  double neg_lambda1;
  double neg_lambda2;
  double neg_lambda3;
};

inline constexpr double kTable1Mu = 1.0;

inline constexpr std::array<Table1Row, 8> kTable1{{
    {20.0, 0.058856148622, 0.050000000000, 0.059819055496, 0.058817735494},
    {30.0, 0.037786534271, 0.033333333333, 0.038112172230, 0.037776614280},
    {40.0, 0.027727324417, 0.025000000000, 0.027880519395, 0.027723505394},
    {50.0, 0.021861600950, 0.020000000000, 0.021947421685, 0.021859775780},
    {100.0, 0.010563106075, 0.010000000000, 0.010577520296, 0.010562921283},
    {500.0, 0.002033066472, 0.002000000000, 0.002033295282, 0.002033065611},
    {1000.0, 0.001009517200, 0.001000000000, 0.001009554734, 0.001009517118},
    {10000.0, 0.000100139278, 0.000100000000, 0.000100139359, 0.000100139278},
}};

inline const Table1Row* find_table1_row(double mu, double A) {
  if (mu != kTable1Mu) return nullptr;
  for (const Table1Row& row : kTable1) {
    if (row.A == A) return &row;
  }
  return nullptr;
}

}  // namespace qsdsr_tools
