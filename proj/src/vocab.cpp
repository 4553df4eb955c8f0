#include "domlm/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <json.hpp>

namespace domlm {

const std::string* TagVocab::tag_of(int id) const {
    int idx = id - kReserved;
    if (idx < 0 || idx >= static_cast<int>(id_to_tag_.size())) return nullptr;
    return &id_to_tag_[static_cast<size_t>(idx)];
}

void TagVocab::add(const std::string& tag) {
    if (tag_to_id_.count(tag)) return;
    int id = kReserved + static_cast<int>(id_to_tag_.size());
    tag_to_id_[tag] = id;
    id_to_tag_.push_back(tag);
}

std::string TagVocab::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [tag, id] : tag_to_id_) j[tag] = id;
    return j.dump();
}

TagVocab TagVocab::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::map<int, std::string> by_id;
    for (auto it = j.begin(); it != j.end(); ++it) by_id[it.value().get<int>()] = it.key();
    TagVocab v;
    for (const auto& [id, tag] : by_id) {
        if (id != v.kReserved + static_cast<int>(v.id_to_tag_.size()))
            fail(Errc::malformed_record, "tag vocab ids are not dense");
        v.tag_to_id_[tag] = id;
        v.id_to_tag_.push_back(tag);
    }
    return v;
}

TagVocab build_tag_vocab(const std::vector<DomTree>& trees, int capacity) {
    std::map<std::string, long> freq;
    for (const DomTree& t : trees) {
        for (const DomNode& n : t.nodes) ++freq[n.tag];
    }
    std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    TagVocab v;
    int budget = capacity - TagVocab::kReserved;
    for (const auto& [tag, count] : ranked) {
        if (budget-- <= 0) break;
        v.add(tag);
    }
    return v;
}

std::vector<std::string> WordTokenizer::split(std::string_view text) const {
    std::vector<std::string> out;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) {
            out.push_back(word);
            word.clear();
        }
    };
    for (char c : text) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isspace(u)) {
            flush();
        } else if (u < 0x80 && !std::isalnum(u)) {
            flush();
            out.push_back(std::string(1, c));  // punctuation is its own token
        } else {
            word.push_back(static_cast<char>(std::tolower(u)));
        }
    }
    flush();
    return out;
}

std::vector<std::string> CharTokenizer::split(std::string_view text) const {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < text.size()) {
        unsigned char u = static_cast<unsigned char>(text[i]);
        if (std::isspace(u)) {
            ++i;
            continue;
        }
        // Keep multi-byte UTF-8 sequences whole.
        size_t len = u < 0x80 ? 1 : u < 0xe0 ? 2 : u < 0xf0 ? 3 : 4;
        len = std::min(len, text.size() - i);
        out.push_back(std::string(text.substr(i, len)));
        i += len;
    }
    return out;
}

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& name) {
    if (name == "word") return std::make_unique<WordTokenizer>();
    if (name == "char") return std::make_unique<CharTokenizer>();
    fail(Errc::malformed_record, "unknown tokenizer: " + name);
}

TextVocab::TextVocab() {
    id_to_token_ = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "[YES]", "[NO]"};
    for (size_t i = 0; i < id_to_token_.size(); ++i) {
        token_to_id_[id_to_token_[i]] = static_cast<int>(i);
    }
}

int TextVocab::add(const std::string& token) {
    auto it = token_to_id_.find(token);
    if (it != token_to_id_.end()) return it->second;
    int id = static_cast<int>(id_to_token_.size());
    token_to_id_[token] = id;
    id_to_token_.push_back(token);
    return id;
}

std::string TextVocab::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (size_t i = kNumSpecial; i < id_to_token_.size(); ++i) {
        j[id_to_token_[i]] = static_cast<int>(i);
    }
    return j.dump();
}

TextVocab TextVocab::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::map<int, std::string> by_id;
    for (auto it = j.begin(); it != j.end(); ++it) by_id[it.value().get<int>()] = it.key();
    TextVocab v;
    for (const auto& [id, token] : by_id) {
        if (id != v.size()) fail(Errc::malformed_record, "text vocab ids are not dense");
        v.add(token);
    }
    return v;
}

namespace {
void collect_tokens(const DomTree& tree, NodeId id, const Tokenizer& tok,
                    std::map<std::string, long>& freq) {
    const DomNode& n = tree.node(id);
    for (const auto& [text, pos] : n.text_chunks) {
        for (std::string& t : tok.split(text)) ++freq[t];
    }
    for (NodeId c : n.children) collect_tokens(tree, c, tok, freq);
}
}  // namespace

TextVocab build_text_vocab(const std::vector<DomTree>& trees, const Tokenizer& tokenizer,
                           int capacity) {
    std::map<std::string, long> freq;
    for (const DomTree& t : trees) collect_tokens(t, t.root, tokenizer, freq);
    std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    TextVocab v;
    int budget = capacity - TextVocab::kNumSpecial;
    for (const auto& [token, count] : ranked) {
        if (budget-- <= 0) break;
        v.add(token);
    }
    return v;
}

}  // namespace domlm
