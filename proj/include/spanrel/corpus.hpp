#pragma once

// Document / span data model and the newline-delimited JSON readers and
// writers for it.
//
// documents.jsonl:  {"doc_id": "...", "text": "...", "meta": {"split": "val"}}
// spans.jsonl:      {"doc_id": "...", "category": "Drug-related",
//                    "char_start": 0, "char_end": 13, "text": "...",
//                    "span_id": "..."}          (span_id optional, gold only)
//
// Offsets count Unicode scalar values of the NFC-normalized document text.

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "spanrel/category.hpp"
#include "spanrel/error.hpp"
#include "spanrel/unicode.hpp"

namespace spanrel {

struct Document {
  std::string doc_id;
  std::string text;
  std::map<std::string, std::string> meta;

  friend bool operator==(const Document&, const Document&) = default;
};

struct GoldSpan {
  std::string span_id;
  std::string doc_id;
  DecisionCategory category{};
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string text;

  friend bool operator==(const GoldSpan&, const GoldSpan&) = default;
};

struct PredictedSpan {
  std::string doc_id;
  DecisionCategory category{};
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string text;

  friend bool operator==(const PredictedSpan&, const PredictedSpan&) = default;
};

enum class SpanKind { Gold, Predicted };

/// Immutable after construction; the constructor enforces referential
/// integrity and unique ids.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Document> documents, std::vector<GoldSpan> gold,
         std::vector<PredictedSpan> predicted)
      : documents_(std::move(documents)), gold_(std::move(gold)), predicted_(std::move(predicted)) {
    for (std::size_t i = 0; i < documents_.size(); ++i) {
      if (!by_id_.emplace(documents_[i].doc_id, i).second) {
        throw ValidationError("duplicate doc_id \"" + documents_[i].doc_id + "\"");
      }
    }
    std::unordered_set<std::string> span_ids;
    for (const auto& g : gold_) {
      require_document(g.doc_id);
      if (!span_ids.insert(g.span_id).second) {
        throw ValidationError("duplicate span_id \"" + g.span_id + "\"");
      }
    }
    for (const auto& p : predicted_) require_document(p.doc_id);
  }

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<GoldSpan>& gold() const { return gold_; }
  const std::vector<PredictedSpan>& predicted() const { return predicted_; }

  bool has_document(const std::string& doc_id) const { return by_id_.count(doc_id) != 0; }

  std::size_t document_index(const std::string& doc_id) const {
    auto it = by_id_.find(doc_id);
    if (it == by_id_.end()) throw ValidationError("unresolved doc_id \"" + doc_id + "\"");
    return it->second;
  }

  const Document& document(const std::string& doc_id) const {
    return documents_[document_index(doc_id)];
  }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.documents_ == b.documents_ && a.gold_ == b.gold_ && a.predicted_ == b.predicted_;
  }

 private:
  void require_document(const std::string& doc_id) const { (void)document_index(doc_id); }

  std::vector<Document> documents_;
  std::vector<GoldSpan> gold_;
  std::vector<PredictedSpan> predicted_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

namespace detail {

inline std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

inline nlohmann::json parse_record(const std::string& line, std::size_t line_no) {
  nlohmann::json rec;
  try {
    rec = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed record" + at_line(line_no) + ": " + e.what());
  }
  if (!rec.is_object()) throw ValidationError("record is not an object" + at_line(line_no));
  return rec;
}

inline std::string string_field(const nlohmann::json& rec, const char* key, std::size_t line_no) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) {
    throw ValidationError(std::string("missing or non-string field \"") + key + "\"" +
                          at_line(line_no));
  }
  return it->get<std::string>();
}

inline std::size_t offset_field(const nlohmann::json& rec, const char* key, std::size_t line_no) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_number_integer() ||
      (it->is_number_integer() && !it->is_number_unsigned() && it->get<long long>() < 0)) {
    throw ValidationError(std::string("field \"") + key +
                          "\" must be a non-negative integer" + at_line(line_no));
  }
  return it->get<std::size_t>();
}

template <class Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(parse_record(line, line_no), line_no);
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

}  // namespace detail

inline std::vector<Document> read_documents(std::istream& in) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  detail::for_each_record(in, [&](const nlohmann::json& rec, std::size_t line_no) {
    Document d;
    d.doc_id = detail::string_field(rec, "doc_id", line_no);
    auto raw_text = detail::string_field(rec, "text", line_no);
    try {
      d.text = unicode::nfc(raw_text);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(e.what()) + detail::at_line(line_no));
    }
    if (d.text.empty()) throw ValidationError("empty document text" + detail::at_line(line_no));
    if (auto it = rec.find("meta"); it != rec.end() && !it->is_null()) {
      if (!it->is_object()) throw ValidationError("meta must be an object" + detail::at_line(line_no));
      for (const auto& [k, v] : it->items()) {
        if (!v.is_string()) {
          throw ValidationError("meta value for \"" + k + "\" must be a string" +
                                detail::at_line(line_no));
        }
        d.meta.emplace(k, v.get<std::string>());
      }
    }
    if (!seen.insert(d.doc_id).second) {
      throw ValidationError("duplicate doc_id \"" + d.doc_id + "\"" + detail::at_line(line_no));
    }
    docs.push_back(std::move(d));
  });
  return docs;
}

inline std::vector<Document> load_documents(const std::string& path) {
  auto in = detail::open_input(path);
  try {
    return read_documents(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

namespace detail {

struct RawSpan {
  std::string span_id;
  std::string doc_id;
  DecisionCategory category{};
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string text;
};

inline std::vector<RawSpan> read_spans(std::istream& in, SpanKind kind,
                                       const std::vector<Document>& documents) {
  std::unordered_map<std::string, const Document*> docs;
  for (const auto& d : documents) docs.emplace(d.doc_id, &d);
  std::unordered_map<std::string, std::u32string> decoded;

  std::vector<RawSpan> out;
  std::unordered_set<std::string> ids;
  std::size_t record_index = 0;
  for_each_record(in, [&](const nlohmann::json& rec, std::size_t line_no) {
    RawSpan s;
    s.doc_id = string_field(rec, "doc_id", line_no);
    auto label = string_field(rec, "category", line_no);
    auto category = try_parse_category(label);
    if (!category) throw ValidationError("unknown category \"" + label + "\"" + at_line(line_no));
    s.category = *category;
    s.char_start = offset_field(rec, "char_start", line_no);
    s.char_end = offset_field(rec, "char_end", line_no);
    auto raw_text = string_field(rec, "text", line_no);
    try {
      s.text = unicode::nfc(raw_text);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(e.what()) + at_line(line_no));
    }

    auto doc = docs.find(s.doc_id);
    if (doc == docs.end()) {
      throw ValidationError("unresolved doc_id \"" + s.doc_id + "\"" + at_line(line_no));
    }
    auto [cached, inserted] = decoded.try_emplace(s.doc_id);
    if (inserted) cached->second = unicode::decode(doc->second->text);
    const std::u32string& doc_text = cached->second;

    if (s.char_end <= s.char_start || s.char_end > doc_text.size()) {
      throw ValidationError("invalid offsets [" + std::to_string(s.char_start) + ", " +
                            std::to_string(s.char_end) + ") for document of length " +
                            std::to_string(doc_text.size()) + at_line(line_no));
    }
    if (unicode::substr(doc_text, s.char_start, s.char_end) != s.text) {
      throw ValidationError("span text mismatch" + at_line(line_no));
    }

    if (kind == SpanKind::Gold) {
      auto it = rec.find("span_id");
      if (it != rec.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError("span_id must be a string" + at_line(line_no));
        s.span_id = it->get<std::string>();
      } else {
        s.span_id = s.doc_id + ":" + std::to_string(record_index);
      }
      if (!ids.insert(s.span_id).second) {
        throw ValidationError("duplicate span_id \"" + s.span_id + "\"" + at_line(line_no));
      }
    }
    ++record_index;
    out.push_back(std::move(s));
  });
  return out;
}

}  // namespace detail

inline std::vector<GoldSpan> read_gold_spans(std::istream& in, const std::vector<Document>& documents) {
  std::vector<GoldSpan> out;
  for (auto& s : detail::read_spans(in, SpanKind::Gold, documents)) {
    out.push_back({std::move(s.span_id), std::move(s.doc_id), s.category, s.char_start,
                   s.char_end, std::move(s.text)});
  }
  return out;
}

inline std::vector<PredictedSpan> read_predicted_spans(std::istream& in,
                                                       const std::vector<Document>& documents) {
  std::vector<PredictedSpan> out;
  for (auto& s : detail::read_spans(in, SpanKind::Predicted, documents)) {
    out.push_back({std::move(s.doc_id), s.category, s.char_start, s.char_end, std::move(s.text)});
  }
  return out;
}

inline std::vector<GoldSpan> load_gold_spans(const std::string& path,
                                             const std::vector<Document>& documents) {
  auto in = detail::open_input(path);
  try {
    return read_gold_spans(in, documents);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline std::vector<PredictedSpan> load_predicted_spans(const std::string& path,
                                                       const std::vector<Document>& documents) {
  auto in = detail::open_input(path);
  try {
    return read_predicted_spans(in, documents);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

/// Loads a corpus; an empty predictions path yields no predicted spans.
inline Corpus load_corpus(const std::string& documents_path, const std::string& gold_path,
                          const std::string& predictions_path = {}) {
  auto docs = load_documents(documents_path);
  auto gold = load_gold_spans(gold_path, docs);
  std::vector<PredictedSpan> predicted;
  if (!predictions_path.empty()) predicted = load_predicted_spans(predictions_path, docs);
  return Corpus(std::move(docs), std::move(gold), std::move(predicted));
}

// Writers emit one compact JSON object per line with keys in sorted order.

inline void write_documents(std::ostream& out, const std::vector<Document>& docs) {
  for (const auto& d : docs) {
    nlohmann::json rec{{"doc_id", d.doc_id}, {"text", d.text}, {"meta", d.meta}};
    out << rec.dump() << '\n';
  }
}

inline void write_gold_spans(std::ostream& out, const std::vector<GoldSpan>& spans) {
  for (const auto& s : spans) {
    nlohmann::json rec{{"span_id", s.span_id},       {"doc_id", s.doc_id},
                       {"category", category_label(s.category)},
                       {"char_start", s.char_start}, {"char_end", s.char_end},
                       {"text", s.text}};
    out << rec.dump() << '\n';
  }
}

inline void write_predicted_spans(std::ostream& out, const std::vector<PredictedSpan>& spans) {
  for (const auto& s : spans) {
    nlohmann::json rec{{"doc_id", s.doc_id},
                       {"category", category_label(s.category)},
                       {"char_start", s.char_start},
                       {"char_end", s.char_end},
                       {"text", s.text}};
    out << rec.dump() << '\n';
  }
}

}  // namespace spanrel
