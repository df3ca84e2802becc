// Builds one member of each family on C_7 (and C_6 for the flip family),
// then asks the classifier what it sees.

#include <iostream>

#include "weakiso/weakiso.hpp"

using namespace weakiso;

int main() {
  const Dimension n(7);

  // σ_{2,2}: sends e_2 to the all-ones word and keeps distance 4 only.
  const CubeMap diagonal = build_krasin_example(n, 2);

  // A triple map: τ on even words, T_{1̄^j} ∘ τ on odd words.
  SigmaIJParams tau = SigmaIJParams::diagonal(n, 1);
  const CubeMap triple = build_triple(TripleParams{tau, Word::zero(n)});

  // Even isometry with different permutations on the two parity classes.
  const CubeMap even = build_even_isometry(EvenIsometryParams{Word::zero(n), CoordPermutation::identity(n), Word::zero(n),
                                                              CoordPermutation::swap(n, 1, 2)});

  // Case I flip family on C_6: swap the pair {000111, 111000}.
  const Dimension six(6);
  const CubeMap flip = build_half_case1(HalfCaseIParams{CoordPermutation::identity(six), {Word::parse("000111")}, Word::zero(six)});

  for (const auto& [name, f] : {std::pair{"diagonal", diagonal}, std::pair{"triple", triple}, std::pair{"even", even}, std::pair{"flip", flip}}) {
    const auto label = classify(f);
    std::cout << name << ": " << class_tag_name(label.tag) << " spectrum " << io::spectrum_json(label.spectrum).dump();
    if (label.recovered) std::cout << " as " << family_tag(family_of(*label.recovered));
    std::cout << '\n';
  }

  // The group of {3}-isometries of C_7 and its order.
  const auto G = aut_group(n, PreservedSet(n, {3}));
  std::cout << "|aut(7,{3})| = " << to_decimal(G.order()) << " with " << G.generators().size() << " generators\n";
}
