#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domlm/dom.hpp"
#include "domlm/vocab.hpp"

namespace domlm {

// Max number of XPath levels carried per token. Deeper paths keep their
// root-side units and drop the leaf side.
constexpr int kMaxXPathDepth = 50;

// A page flattened to model tokens in reading order. Every token knows its
// owning node; first_of_node marks the first token each node contributed.
struct TokenizedPage {
    std::vector<int> tokens;              // text vocab ids
    std::vector<int> token_node;          // owning node id per token
    std::vector<uint8_t> first_of_node;   // 1 on a node's first token
    std::optional<std::pair<int, int>> title_span;  // [begin, end) token range
    std::vector<XPathExpr> node_xpaths;   // indexed by node id

    int size() const { return static_cast<int>(tokens.size()); }
    const XPathExpr& xpath_of_token(int t) const {
        return node_xpaths[static_cast<size_t>(token_node[static_cast<size_t>(t)])];
    }
};

TokenizedPage tokenize_page(const DomTree& tree, const Tokenizer& tokenizer,
                            const TextVocab& vocab);

// Fixed-length (tag id, subscript id) encoding of one XPath.
struct XPathUnitSeq {
    std::vector<int> tag_ids;  // length kMaxXPathDepth
    std::vector<int> sub_ids;

    bool operator==(const XPathUnitSeq&) const = default;
};

XPathUnitSeq encode_xpath(const XPathExpr& xp, const TagVocab& vocab, int max_depth = kMaxXPathDepth);
XPathUnitSeq pad_xpath_seq(int max_depth = kMaxXPathDepth);

// Inverse over non-PAD positions; unresolvable (UNK) tags render as "?".
XPathExpr decode_xpath(const XPathUnitSeq& seq, const TagVocab& vocab);

// One model-ready window. The window metadata below the wire fields ties
// positions back to the source page and is not part of the serialized
// schema.
struct EncodedExample {
    int seq_len = 0;    // S
    int xpath_len = 0;  // L
    std::vector<int> token_ids;      // [S]
    std::vector<int> position_ids;   // [S], always 0..S-1
    std::vector<int> segment_ids;    // [S]
    std::vector<int> xpath_tags;     // [S * L], row-major
    std::vector<int> xpath_subs;     // [S * L]
    std::vector<uint8_t> attention_mask;  // [S]

    int ctx_begin = 0;    // sequence position of the first context token
    int ctx_len = 0;      // number of context tokens in this window
    int page_offset = 0;  // page token index of the first context token

    int* xpath_tag_row(int pos) { return xpath_tags.data() + static_cast<size_t>(pos) * xpath_len; }
    const int* xpath_tag_row(int pos) const {
        return xpath_tags.data() + static_cast<size_t>(pos) * xpath_len;
    }
    int* xpath_sub_row(int pos) { return xpath_subs.data() + static_cast<size_t>(pos) * xpath_len; }
    const int* xpath_sub_row(int pos) const {
        return xpath_subs.data() + static_cast<size_t>(pos) * xpath_len;
    }
    // Page token index at a context position; -1 outside the context or on
    // the reserved yes/no tokens, which own no page token.
    int page_index_at(int pos) const {
        if (pos < ctx_begin || pos >= ctx_begin + ctx_len) return -1;
        int idx = page_offset + (pos - ctx_begin);
        return idx < 0 ? -1 : idx;
    }
};

struct EncodeOptions {
    int max_seq_len = 128;       // S
    int max_xpath_depth = kMaxXPathDepth;
    int stride = 0;              // 0 means max_seq_len / 2
    bool yes_no_tokens = false;  // prepend [YES] [NO] to the context
};

// Lays out [CLS] question [SEP] context ... [SEP] (or [CLS] context [SEP]
// without a question), slicing long contexts into overlapping windows.
// Question and special positions carry segment 0 and the all-PAD XPath;
// context carries segment 1 when a question is present, else segment 0.
std::vector<EncodedExample> encode_example(const TokenizedPage& page, const TagVocab& tag_vocab,
                                           const std::vector<int>& question_tokens,
                                           const EncodeOptions& opts);

// Wire schema (the data-stage/training-stage contract): one JSON object per
// example with keys token_ids, segment_ids, xpath_tags, xpath_subs,
// attention_mask.
std::string example_to_json(const EncodedExample& ex);
EncodedExample example_from_json(const std::string& line);

}  // namespace domlm
