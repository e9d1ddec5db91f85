#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "icd/matrix.hpp"

namespace icd::embed {

/// Ordered set of unique, whitespace-free, non-empty tokens.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> tokens);

    /// Appends a token. Throws on duplicates, empty tokens, or whitespace.
    std::size_t add(const std::string& token);

    std::size_t size() const { return tokens_.size(); }
    const std::string& token(std::size_t i) const { return tokens_[i]; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    bool contains(const std::string& token) const { return index_.count(token) != 0; }

    /// Zero-based position, or npos when absent.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const std::string& token) const {
        auto it = index_.find(token);
        return it == index_.end() ? npos : it->second;
    }

    bool operator==(const Vocabulary& o) const { return tokens_ == o.tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// A vocabulary bound to a dense |V| x d matrix of word vectors from one source.
struct EmbeddingSet {
    Vocabulary vocab;
    Matrix matrix;
    std::string source_id;

    std::size_t dim() const { return matrix.cols(); }
    std::size_t size() const { return vocab.size(); }
};

/// Shape + finiteness check, applied after every transform that produces a set.
void validate(const EmbeddingSet& set);

/// Word-vector text format: header "<count> <dim>", then one line per word
/// (token followed by dim decimal numbers, space-separated). UTF-8, \n endings.
EmbeddingSet load_embeddings(const std::string& path);

/// Writes the exact format accepted by load_embeddings with 17-significant-digit
/// values, so load(save(x)) == x elementwise.
void save_embeddings(const EmbeddingSet& set, const std::string& path);

/// Intersection of the two vocabularies, ordered by a's token order.
Vocabulary common_vocabulary(const EmbeddingSet& a, const EmbeddingSet& b);

/// Rows of `set` for the given tokens, in the given order. Every token must be
/// present in set.vocab.
Matrix rows_for(const EmbeddingSet& set, const Vocabulary& tokens);

}  // namespace icd::embed
