#include "domlm/features.hpp"

#include <algorithm>

#include <json.hpp>

namespace domlm {

namespace {

void walk_tokens(const DomTree& tree, NodeId id, const Tokenizer& tok, const TextVocab& vocab,
                 TokenizedPage& page, std::vector<uint8_t>& node_seen) {
    const DomNode& n = tree.node(id);
    size_t chunk_idx = 0;
    auto emit_chunks_at = [&](int position) {
        for (; chunk_idx < n.text_chunks.size() &&
               n.text_chunks[chunk_idx].second == position;
             ++chunk_idx) {
            for (const std::string& piece : tok.split(n.text_chunks[chunk_idx].first)) {
                page.tokens.push_back(vocab.lookup(piece));
                page.token_node.push_back(id);
                bool first = !node_seen[static_cast<size_t>(id)];
                node_seen[static_cast<size_t>(id)] = 1;
                page.first_of_node.push_back(first ? 1 : 0);
            }
        }
    };
    for (size_t i = 0; i <= n.children.size(); ++i) {
        emit_chunks_at(static_cast<int>(i));
        if (i < n.children.size()) {
            walk_tokens(tree, n.children[i], tok, vocab, page, node_seen);
        }
    }
}

}  // namespace

TokenizedPage tokenize_page(const DomTree& tree, const Tokenizer& tokenizer,
                            const TextVocab& vocab) {
    TokenizedPage page;
    std::vector<uint8_t> node_seen(tree.nodes.size(), 0);
    walk_tokens(tree, tree.root, tokenizer, vocab, page, node_seen);

    page.node_xpaths.resize(tree.nodes.size());
    for (const DomNode& n : tree.nodes) {
        page.node_xpaths[static_cast<size_t>(n.id)] = xpath_of(tree, n.id);
    }

    // Title span: the token range of the title subtree (contiguous, since
    // the walk above visits subtrees contiguously).
    for (const DomNode& n : tree.nodes) {
        if (!n.is_title) continue;
        auto in_title = [&](NodeId id) {
            for (NodeId cur = id; cur != kNoNode; cur = tree.node(cur).parent) {
                if (cur == n.id) return true;
            }
            return false;
        };
        int begin = -1, end = -1;
        for (int t = 0; t < page.size(); ++t) {
            if (in_title(page.token_node[static_cast<size_t>(t)])) {
                if (begin < 0) begin = t;
                end = t + 1;
            }
        }
        if (begin >= 0) page.title_span = std::make_pair(begin, end);
        break;
    }
    return page;
}

XPathUnitSeq pad_xpath_seq(int max_depth) {
    XPathUnitSeq seq;
    seq.tag_ids.assign(static_cast<size_t>(max_depth), TagVocab::kPad);
    seq.sub_ids.assign(static_cast<size_t>(max_depth), 0);
    return seq;
}

XPathUnitSeq encode_xpath(const XPathExpr& xp, const TagVocab& vocab, int max_depth) {
    XPathUnitSeq seq = pad_xpath_seq(max_depth);
    int levels = std::min<int>(static_cast<int>(xp.units.size()), max_depth);
    for (int j = 0; j < levels; ++j) {
        const auto& [tag, sub] = xp.units[static_cast<size_t>(j)];
        seq.tag_ids[static_cast<size_t>(j)] = vocab.lookup(tag);
        seq.sub_ids[static_cast<size_t>(j)] = std::min(sub, kMaxSubscript);
    }
    return seq;
}

XPathExpr decode_xpath(const XPathUnitSeq& seq, const TagVocab& vocab) {
    XPathExpr xp;
    for (size_t j = 0; j < seq.tag_ids.size(); ++j) {
        if (seq.tag_ids[j] == TagVocab::kPad) break;
        const std::string* tag = vocab.tag_of(seq.tag_ids[j]);
        xp.units.emplace_back(tag ? *tag : "?", seq.sub_ids[j]);
    }
    return xp;
}

std::vector<EncodedExample> encode_example(const TokenizedPage& page, const TagVocab& tag_vocab,
                                           const std::vector<int>& question_tokens,
                                           const EncodeOptions& opts) {
    const int S = opts.max_seq_len;
    const int L = opts.max_xpath_depth;
    if (S < 16) fail(Errc::shape_mismatch, "max sequence length must be at least 16");
    const bool has_question = !question_tokens.empty();
    const int q_len = static_cast<int>(question_tokens.size());
    const int n_special = has_question ? 3 : 2;  // CLS + SEPs

    std::vector<int> context = page.tokens;
    if (opts.yes_no_tokens) {
        context.insert(context.begin(), {TextVocab::kYes, TextVocab::kNo});
    }
    const int ctx_total = static_cast<int>(context.size());
    const int budget = S - n_special - q_len;
    if (q_len > S - 3 || (budget <= 0 && ctx_total > 0)) {
        fail(Errc::question_too_long,
             "question of " + std::to_string(q_len) + " tokens leaves no context room at S=" +
                 std::to_string(S));
    }
    int stride = opts.stride > 0 ? opts.stride : S / 2;
    stride = std::min(stride, std::max(budget, 1));

    // Maps a window-local context index to (page index, xpath, node flags).
    auto page_index_of = [&](int ctx_idx) {
        return opts.yes_no_tokens ? ctx_idx - 2 : ctx_idx;  // YES/NO own no page token
    };

    int n_windows = ctx_total <= budget
                        ? 1
                        : static_cast<int>((ctx_total - budget + stride - 1) / stride) + 1;

    std::vector<EncodedExample> out;
    const int ctx_segment = has_question ? 1 : 0;
    for (int w = 0; w < n_windows; ++w) {
        int start = w * stride;
        int len = std::min(budget, ctx_total - start);
        if (len < 0) len = 0;

        EncodedExample ex;
        ex.seq_len = S;
        ex.xpath_len = L;
        ex.token_ids.assign(static_cast<size_t>(S), TextVocab::kPad);
        ex.position_ids.resize(static_cast<size_t>(S));
        for (int i = 0; i < S; ++i) ex.position_ids[static_cast<size_t>(i)] = i;
        ex.segment_ids.assign(static_cast<size_t>(S), 0);
        ex.attention_mask.assign(static_cast<size_t>(S), 0);
        XPathUnitSeq pad = pad_xpath_seq(L);
        ex.xpath_tags.reserve(static_cast<size_t>(S) * L);
        ex.xpath_subs.reserve(static_cast<size_t>(S) * L);
        for (int i = 0; i < S; ++i) {
            ex.xpath_tags.insert(ex.xpath_tags.end(), pad.tag_ids.begin(), pad.tag_ids.end());
            ex.xpath_subs.insert(ex.xpath_subs.end(), pad.sub_ids.begin(), pad.sub_ids.end());
        }

        int pos = 0;
        auto put = [&](int token, int segment) {
            ex.token_ids[static_cast<size_t>(pos)] = token;
            ex.segment_ids[static_cast<size_t>(pos)] = segment;
            ex.attention_mask[static_cast<size_t>(pos)] = 1;
            ++pos;
        };
        put(TextVocab::kCls, 0);
        if (has_question) {
            for (int q : question_tokens) put(q, 0);
            put(TextVocab::kSep, 0);
        }
        ex.ctx_begin = pos;
        ex.ctx_len = len;
        ex.page_offset = page_index_of(start);
        for (int i = 0; i < len; ++i) {
            int ctx_idx = start + i;
            int page_idx = page_index_of(ctx_idx);
            if (page_idx >= 0) {
                XPathUnitSeq seq = encode_xpath(page.xpath_of_token(page_idx), tag_vocab, L);
                std::copy(seq.tag_ids.begin(), seq.tag_ids.end(), ex.xpath_tag_row(pos));
                std::copy(seq.sub_ids.begin(), seq.sub_ids.end(), ex.xpath_sub_row(pos));
            }
            put(context[static_cast<size_t>(ctx_idx)], ctx_segment);
        }
        put(TextVocab::kSep, 0);
        out.push_back(std::move(ex));
    }
    return out;
}

std::string example_to_json(const EncodedExample& ex) {
    nlohmann::json j;
    j["token_ids"] = ex.token_ids;
    j["segment_ids"] = ex.segment_ids;
    nlohmann::json tags = nlohmann::json::array();
    nlohmann::json subs = nlohmann::json::array();
    for (int i = 0; i < ex.seq_len; ++i) {
        tags.push_back(std::vector<int>(ex.xpath_tag_row(i), ex.xpath_tag_row(i) + ex.xpath_len));
        subs.push_back(std::vector<int>(ex.xpath_sub_row(i), ex.xpath_sub_row(i) + ex.xpath_len));
    }
    j["xpath_tags"] = std::move(tags);
    j["xpath_subs"] = std::move(subs);
    nlohmann::json mask = nlohmann::json::array();
    for (uint8_t m : ex.attention_mask) mask.push_back(m != 0);
    j["attention_mask"] = std::move(mask);
    return j.dump();
}

EncodedExample example_from_json(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line);
    EncodedExample ex;
    ex.token_ids = j.at("token_ids").get<std::vector<int>>();
    ex.segment_ids = j.at("segment_ids").get<std::vector<int>>();
    ex.seq_len = static_cast<int>(ex.token_ids.size());
    ex.position_ids.resize(static_cast<size_t>(ex.seq_len));
    for (int i = 0; i < ex.seq_len; ++i) ex.position_ids[static_cast<size_t>(i)] = i;
    const auto& tags = j.at("xpath_tags");
    const auto& subs = j.at("xpath_subs");
    ex.xpath_len = tags.empty() ? 0 : static_cast<int>(tags[0].size());
    for (const auto& row : tags) {
        auto v = row.get<std::vector<int>>();
        ex.xpath_tags.insert(ex.xpath_tags.end(), v.begin(), v.end());
    }
    for (const auto& row : subs) {
        auto v = row.get<std::vector<int>>();
        ex.xpath_subs.insert(ex.xpath_subs.end(), v.begin(), v.end());
    }
    for (const auto& m : j.at("attention_mask")) ex.attention_mask.push_back(m.get<bool>() ? 1 : 0);
    return ex;
}

}  // namespace domlm
