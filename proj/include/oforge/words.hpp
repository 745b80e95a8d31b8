#pragma once

#include "oforge/operad.hpp"
#include "oforge/perm.hpp"

#include <string>
#include <vector>

namespace oforge {

/// Combinatorial model of the associative operad: the arity-n basis is the
/// set of orderings (words) of the letters 1..n, composition substitutes a
/// word into a letter with renumbering, and the symmetric action relabels
/// letters. Shares no code with the operad machinery, so it serves as an
/// independent oracle for the axiom checkers.
using Word = std::vector<int>;

/// All words on 1..n in lexicographic order; n = 0 gives the empty word.
std::vector<Word> all_words(int n);
/// Substitution of v into letter i of w: letters of w above i shift up by
/// |v| - 1, letter i expands to the block v shifted by i - 1. |v| = 0
/// deletes the letter.
Word word_compose(const Word& w, int i, const Word& v);
/// Right action: the letter at each position is relabeled by sigma^{-1}.
Word word_act(const Word& w, const Perm& sigma);
std::string word_to_string(const Word& w);

/// Pure-combinatorics self-check of the model up to arity N: right-action
/// law, equivariance against the block-bookkeeping permutation insertion,
/// all three associativity cases, and the unit laws.
Report validate_word_model(int N);

/// The associative operad over the terminal category, built from the word
/// tables: components Q[Sigma_n] for 1 <= n <= N (0 <= n <= N when
/// with_constants is set), compositions and actions tabulated from
/// word_compose and word_act, unit the one-letter word.
UnitalCOperad build_as_operad(const LinearCat& terminal, int N,
                              bool with_constants = false);

} // namespace oforge
