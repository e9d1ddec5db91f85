#include "icd/embed_core.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "icd/util.hpp"

namespace icd::embed {

namespace {

bool has_whitespace(const std::string& s) {
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return true;
    }
    return false;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
    tokens_.reserve(tokens.size());
    for (auto& t : tokens) add(t);
}

std::size_t Vocabulary::add(const std::string& token) {
    if (token.empty()) throw std::runtime_error("empty token");
    if (has_whitespace(token)) throw std::runtime_error("token contains whitespace: '" + token + "'");
    auto [it, inserted] = index_.emplace(token, tokens_.size());
    if (!inserted) throw std::runtime_error("duplicate token: '" + token + "'");
    tokens_.push_back(token);
    return it->second;
}

void validate(const EmbeddingSet& set) {
    if (set.matrix.rows() != set.vocab.size()) {
        throw std::runtime_error("embedding set: row count " + std::to_string(set.matrix.rows()) +
                                 " != vocabulary size " + std::to_string(set.vocab.size()));
    }
    if (!set.matrix.all_finite()) throw std::runtime_error("embedding set: non-finite entry");
}

EmbeddingSet load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header");
    auto header = split_ws(line);
    if (header.size() != 2) throw std::runtime_error(path + ": malformed header '" + line + "'");
    const long long count = parse_int(header[0]);
    const long long dim = parse_int(header[1]);
    if (count < 0 || dim <= 0) throw std::runtime_error(path + ": malformed header '" + line + "'");

    EmbeddingSet set;
    set.matrix = Matrix(static_cast<std::size_t>(count), static_cast<std::size_t>(dim));
    for (long long r = 0; r < count; ++r) {
        if (!std::getline(in, line)) {
            throw std::runtime_error(path + ": expected " + std::to_string(count) + " rows, got " +
                                     std::to_string(r));
        }
        auto fields = split_ws(line);
        if (fields.size() != static_cast<std::size_t>(dim) + 1) {
            throw std::runtime_error(path + " row " + std::to_string(r) + ": expected " +
                                     std::to_string(dim + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        set.vocab.add(std::string(fields[0]));
        double* row = set.matrix.row(static_cast<std::size_t>(r));
        for (long long c = 0; c < dim; ++c) {
            const double v = parse_double(fields[static_cast<std::size_t>(c) + 1]);
            if (!std::isfinite(v)) {
                throw std::runtime_error(path + " row " + std::to_string(r) + ": non-finite value");
            }
            row[c] = v;
        }
    }
    validate(set);
    return set;
}

void save_embeddings(const EmbeddingSet& set, const std::string& path) {
    std::ostringstream out;
    out << set.vocab.size() << ' ' << set.dim() << '\n';
    for (std::size_t i = 0; i < set.vocab.size(); ++i) {
        out << set.vocab.token(i);
        const double* row = set.matrix.row(i);
        for (std::size_t c = 0; c < set.dim(); ++c) out << ' ' << format_double(row[c]);
        out << '\n';
    }
    write_file(path, out.str());
}

Vocabulary common_vocabulary(const EmbeddingSet& a, const EmbeddingSet& b) {
    Vocabulary out;
    for (const auto& t : a.vocab.tokens()) {
        if (b.vocab.contains(t)) out.add(t);
    }
    return out;
}

Matrix rows_for(const EmbeddingSet& set, const Vocabulary& tokens) {
    Matrix out(tokens.size(), set.dim());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::size_t r = set.vocab.find(tokens.token(i));
        if (r == Vocabulary::npos) throw std::runtime_error("token absent: " + tokens.token(i));
        const double* src = set.matrix.row(r);
        double* dst = out.row(i);
        for (std::size_t c = 0; c < set.dim(); ++c) dst[c] = src[c];
    }
    return out;
}

}  // namespace icd::embed
