// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ttsfe/synth.hpp"

#include <sstream>

#include "ttsfe/common.hpp"
#include "ttsfe/tokenizer.hpp"

namespace ttsfe {

namespace {

struct GoldenRow {
  const char* text;
  const char* rules;  // space-separated rule names, in application order
  const char* norm;   // hand-written expected spoken form
};

const GoldenRow kGolden[] = {
    {"hello world", "PLAIN PLAIN", "hello world"},
    {"The quick brown fox", "PLAIN PLAIN PLAIN PLAIN", "the quick brown fox"},
    {"Hello, world.", "PLAIN PUNCT_SILENT PLAIN PUNCT_SILENT", "hello world"},
    {"don't stop", "PLAIN PLAIN PLAIN PLAIN", "don't stop"},
    {"42", "CARDINAL_1TOK", "forty two"},
    {"I have 3 cats", "PLAIN PLAIN CARDINAL_1TOK PLAIN", "i have three cats"},
    {"0", "CARDINAL_1TOK", "zero"},
    {"100 bottles of beer", "CARDINAL_1TOK PLAIN PLAIN PLAIN",
     "one hundred bottles of beer"},
    {"She bought 12 eggs", "PLAIN PLAIN CARDINAL_1TOK PLAIN",
     "she bought twelve eggs"},
    {"007", "CARDINAL_1TOK", "zero zero seven"},
    {"1234567890", "CARDINAL_1TOK",
     "one two three four five six seven eight nine zero"},
    {"99 bottles", "CARDINAL_1TOK PLAIN", "ninety nine bottles"},
    {"route 66", "PLAIN CARDINAL_1TOK", "route sixty six"},
    {"1st", "ORDINAL_SUFFIX", "first"},
    {"2nd place", "ORDINAL_SUFFIX PLAIN", "second place"},
    {"the 3rd man", "PLAIN ORDINAL_SUFFIX PLAIN", "the third man"},
    {"4th of July", "ORDINAL_SUFFIX PLAIN PLAIN", "fourth of july"},
    {"21st century", "ORDINAL_SUFFIX PLAIN", "twenty first century"},
    {"her 112th win", "PLAIN ORDINAL_SUFFIX PLAIN", "her one hundred twelfth win"},
    {"23rd", "ORDINAL_SUFFIX", "twenty third"},
    {"11th hour", "ORDINAL_SUFFIX PLAIN", "eleventh hour"},
    {"3.14", "DECIMAL_3TOK", "three point one four"},
    {"0.5", "DECIMAL_3TOK", "zero point five"},
    {"12.75 total", "DECIMAL_3TOK PLAIN", "twelve point seven five total"},
    {"about 2.0 liters", "PLAIN DECIMAL_3TOK PLAIN", "about two point zero liters"},
    {"98.6 degrees", "DECIMAL_3TOK PLAIN", "ninety eight point six degrees"},
    {"7/8 inches", "FRACTION_3TOK PLAIN", "seven eighths inches"},
    {"1/2", "FRACTION_3TOK", "one half"},
    {"1/3 cup", "FRACTION_3TOK PLAIN", "one third cup"},
    {"3/4", "FRACTION_3TOK", "three fourths"},
    {"a 2/3 majority", "PLAIN FRACTION_3TOK PLAIN", "a two thirds majority"},
    {"5/16", "FRACTION_3TOK", "five sixteenths"},
    {"add 1/2 cup", "PLAIN FRACTION_3TOK PLAIN", "add one half cup"},
    {"Cut 7/8 of it", "PLAIN FRACTION_3TOK PLAIN PLAIN", "cut seven eighths of it"},
    {"3/4/2021", "DATE_SLASH_MDY", "march fourth twenty twenty one"},
    {"12/25/1999", "DATE_SLASH_MDY", "december twenty fifth nineteen ninety nine"},
    {"7/4/1776", "DATE_SLASH_MDY", "july fourth seventeen seventy six"},
    {"1/1/2000", "DATE_SLASH_MDY", "january first two thousand"},
    {"born 5/23/1982", "PLAIN DATE_SLASH_MDY",
     "born may twenty third nineteen eighty two"},
    {"1/2023", "DATE_SLASH_MY", "january twenty twenty three"},
    {"12/1999", "DATE_SLASH_MY", "december nineteen ninety nine"},
    {"due 6/2010", "PLAIN DATE_SLASH_MY", "due june twenty ten"},
    {"4/2024", "DATE_SLASH_MY", "april twenty twenty four"},
    {"March 2021", "DATE_MONTH_YEAR", "march twenty twenty one"},
    {"in July 1969", "PLAIN DATE_MONTH_YEAR", "in july nineteen sixty nine"},
    {"October 1917", "DATE_MONTH_YEAR", "october nineteen seventeen"},
    {"since 1999", "PLAIN YEAR_4DIGIT", "since nineteen ninety nine"},
    {"the 1984 novel", "PLAIN YEAR_4DIGIT PLAIN", "the nineteen eighty four novel"},
    {"in 2005", "PLAIN YEAR_4DIGIT", "in two thousand five"},
    {"5:00", "TIME_COLON", "five o'clock"},
    {"5:05 pm", "TIME_COLON PLAIN", "five oh five pm"},
    {"at 12:30", "PLAIN TIME_COLON", "at twelve thirty"},
    {"23:59", "TIME_COLON", "twenty three fifty nine"},
    {"0:15", "TIME_COLON", "zero fifteen"},
    {"9:05 am", "TIME_COLON PLAIN", "nine oh five am"},
    {"11:11", "TIME_COLON", "eleven eleven"},
    {"$5", "CURRENCY_DOLLAR_PREFIX", "five dollars"},
    {"$1", "CURRENCY_DOLLAR_PREFIX", "one dollar"},
    {"$3.50", "CURRENCY_DOLLAR_PREFIX", "three dollars and fifty cents"},
    {"$1.01", "CURRENCY_DOLLAR_PREFIX", "one dollar and one cent"},
    {"it costs $20", "PLAIN PLAIN CURRENCY_DOLLAR_PREFIX", "it costs twenty dollars"},
    {"$12.99 each", "CURRENCY_DOLLAR_PREFIX PLAIN",
     "twelve dollars and ninety nine cents each"},
    {"$999", "CURRENCY_DOLLAR_PREFIX", "nine hundred ninety nine dollars"},
    {"5 kg", "MEASURE_UNIT_SUFFIX", "five kilograms"},
    {"1 kg", "MEASURE_UNIT_SUFFIX", "one kilogram"},
    {"10 km away", "MEASURE_UNIT_SUFFIX PLAIN", "ten kilometers away"},
    {"6 ft tall", "MEASURE_UNIT_SUFFIX PLAIN", "six feet tall"},
    {"1 ft", "MEASURE_UNIT_SUFFIX", "one foot"},
    {"3 lb of flour", "MEASURE_UNIT_SUFFIX PLAIN PLAIN", "three pounds of flour"},
    {"12 oz", "MEASURE_UNIT_SUFFIX", "twelve ounces"},
    {"100 mi", "MEASURE_UNIT_SUFFIX", "one hundred miles"},
    {"440 hz", "MEASURE_UNIT_SUFFIX", "four hundred forty hertz"},
    {"2 cm", "MEASURE_UNIT_SUFFIX", "two centimeters"},
    {"9 mm", "MEASURE_UNIT_SUFFIX", "nine millimeters"},
    {"50%", "PERCENT_SUFFIX", "fifty percent"},
    {"a 10% tip", "PLAIN PERCENT_SUFFIX PLAIN", "a ten percent tip"},
    {"100%", "PERCENT_SUFFIX", "one hundred percent"},
    {"St. Mary's St.", "ST_AS_SAINT PLAIN PLAIN PLAIN ST_AS_STREET",
     "saint mary's street"},
    {"St. Paul", "ST_AS_SAINT PLAIN", "saint paul"},
    {"Main St.", "PLAIN ST_AS_STREET", "main street"},
    {"St. John's Dr.", "ST_AS_SAINT PLAIN PLAIN PLAIN DR_AS_DRIVE",
     "saint john's drive"},
    {"Dr. Smith", "DR_AS_DOCTOR PLAIN", "doctor smith"},
    {"Sunset Dr.", "PLAIN DR_AS_DRIVE", "sunset drive"},
    {"Dr. Brown lives on Elm Dr.",
     "DR_AS_DOCTOR PLAIN PLAIN PLAIN PLAIN DR_AS_DRIVE",
     "doctor brown lives on elm drive"},
    {"Mr. Jones", "MR_AS_MISTER PLAIN", "mister jones"},
    {"Mr. and Mrs. Smith", "MR_AS_MISTER PLAIN PLAIN PUNCT_SILENT PLAIN",
     "mister and mrs smith"},
    {"apples, oranges, etc.",
     "PLAIN PUNCT_SILENT PLAIN PUNCT_SILENT ETC_AS_ET_CETERA",
     "apples oranges et cetera"},
    {"NASA", "LETTERS_SPELL", "n a s a"},
    {"the FBI agent", "PLAIN LETTERS_SPELL PLAIN", "the f b i agent"},
    {"USA", "LETTERS_SPELL", "u s a"},
    {"an IBM PC", "PLAIN LETTERS_SPELL LETTERS_SPELL", "an i b m p c"},
    {"HTML", "LETTERS_SPELL", "h t m l"},
    {"ABC and XYZ", "LETTERS_SPELL PLAIN LETTERS_SPELL", "a b c and x y z"},
    {"5551234", "TELEPHONE_DIGITS", "five five five one two three four"},
    {"call 5551234567", "PLAIN TELEPHONE_DIGITS",
     "call five five five one two three four five six seven"},
    {"555-1234", "TELEPHONE_DASHED", "five five five one two three four"},
    {"call 555-867-5309 now", "PLAIN TELEPHONE_DASHED PLAIN",
     "call five five five eight six seven five three zero nine now"},
    {"dial 800-555-0199", "PLAIN TELEPHONE_DASHED",
     "dial eight zero zero five five five zero one nine nine"},
    {"example.com", "URL_DOTTED", "example dot com"},
    {"visit github.io today", "PLAIN URL_DOTTED PLAIN", "visit github dot io today"},
    {"wikipedia.org", "URL_DOTTED", "wikipedia dot org"},
    {"mit.edu", "URL_DOTTED", "mit dot edu"},
    {"Meet Dr. Adams at 5:30", "PLAIN DR_AS_DOCTOR PLAIN PLAIN TIME_COLON",
     "meet doctor adams at five thirty"},
    {"The 3rd item costs $4.25",
     "PLAIN ORDINAL_SUFFIX PLAIN PLAIN CURRENCY_DOLLAR_PREFIX",
     "the third item costs four dollars and twenty five cents"},
    {"On 7/4/1776 they signed", "PLAIN DATE_SLASH_MDY PLAIN PLAIN",
     "on july fourth seventeen seventy six they signed"},
    {"It weighs 5 kg, not 6 lb.",
     "PLAIN PLAIN MEASURE_UNIT_SUFFIX PUNCT_SILENT PLAIN MEASURE_UNIT_SUFFIX "
     "PUNCT_SILENT",
     "it weighs five kilograms not six pounds"},
    {"A 2/3 vote on 1/2023", "PLAIN FRACTION_3TOK PLAIN PLAIN DATE_SLASH_MY",
     "a two thirds vote on january twenty twenty three"},
    {"Save 20% at shop.net", "PLAIN PERCENT_SUFFIX PLAIN URL_DOTTED",
     "save twenty percent at shop dot net"},
    {"Mr. Lee paid $100", "MR_AS_MISTER PLAIN PLAIN CURRENCY_DOLLAR_PREFIX",
     "mister lee paid one hundred dollars"},
    {"12:30 on 3/4/2021", "TIME_COLON PLAIN DATE_SLASH_MDY",
     "twelve thirty on march fourth twenty twenty one"},
    {"He ran 5 km in 2023", "PLAIN PLAIN MEASURE_UNIT_SUFFIX PLAIN YEAR_4DIGIT",
     "he ran five kilometers in twenty twenty three"},
    {"Call 555-1234 etc.", "PLAIN TELEPHONE_DASHED ETC_AS_ET_CETERA",
     "call five five five one two three four et cetera"},
    {"the 2nd of 12", "PLAIN ORDINAL_SUFFIX PLAIN CARDINAL_1TOK",
     "the second of twelve"},
    {"He owes $7.05", "PLAIN PLAIN CURRENCY_DOLLAR_PREFIX",
     "he owes seven dollars and five cents"},
    {"7:00 on 12/25/1999", "TIME_COLON PLAIN DATE_SLASH_MDY",
     "seven o'clock on december twenty fifth nineteen ninety nine"},
    {"Flight 370 to LAX", "PLAIN CARDINAL_1TOK PLAIN LETTERS_SPELL",
     "flight three hundred seventy to l a x"},
    {"the word st here", "PLAIN PLAIN PLAIN PLAIN", "the word st here"},
    {"A1 B2", "PLAIN CARDINAL_1TOK PLAIN CARDINAL_1TOK", "a one b two"},
    {"well-known fact", "PLAIN PUNCT_SILENT PLAIN PLAIN", "well known fact"},
    {"3 + 4", "CARDINAL_1TOK PLAIN CARDINAL_1TOK", "three + four"},
};

// Desk normalization set: longer mixed-rule sentences for training runs.
const GoldenRow kDeskTn[] = {
    {"St. Mary's St.", "ST_AS_SAINT PLAIN PLAIN PLAIN ST_AS_STREET",
     "saint mary's street"},
    {"7/8 inches", "FRACTION_3TOK PLAIN", "seven eighths inches"},
    {"pay $3.50 now", "PLAIN CURRENCY_DOLLAR_PREFIX PLAIN",
     "pay three dollars and fifty cents now"},
    {"meet at 3:00", "PLAIN PLAIN TIME_COLON", "meet at three o'clock"},
    {"lunch at 12:45", "PLAIN PLAIN TIME_COLON", "lunch at twelve forty five"},
    {"born 3/4/2021", "PLAIN DATE_SLASH_MDY",
     "born march fourth twenty twenty one"},
    {"due 12/2005", "PLAIN DATE_SLASH_MY", "due december two thousand five"},
    {"May 2020 report", "DATE_MONTH_YEAR PLAIN", "may twenty twenty report"},
    {"copyright 1999", "PLAIN YEAR_4DIGIT", "copyright nineteen ninety nine"},
    {"the 3rd prize", "PLAIN ORDINAL_SUFFIX PLAIN", "the third prize"},
    {"21st birthday", "ORDINAL_SUFFIX PLAIN", "twenty first birthday"},
    {"weighs 5 kg", "PLAIN MEASURE_UNIT_SUFFIX", "weighs five kilograms"},
    {"walk 1 mi", "PLAIN MEASURE_UNIT_SUFFIX", "walk one mile"},
    {"50% off", "PERCENT_SUFFIX PLAIN", "fifty percent off"},
    {"call 5551234", "PLAIN TELEPHONE_DIGITS",
     "call five five five one two three four"},
    {"dial 555-123-4567 today", "PLAIN TELEPHONE_DASHED PLAIN",
     "dial five five five one two three four five six seven today"},
    {"visit example.com now", "PLAIN URL_DOTTED PLAIN",
     "visit example dot com now"},
    {"Dr. Smith arrived", "DR_AS_DOCTOR PLAIN PLAIN", "doctor smith arrived"},
    {"Maple Dr. ahead", "PLAIN DR_AS_DRIVE PLAIN", "maple drive ahead"},
    {"Mr. Jones waved", "MR_AS_MISTER PLAIN PLAIN", "mister jones waved"},
    {"pears, plums, etc. remain",
     "PLAIN PUNCT_SILENT PLAIN PUNCT_SILENT ETC_AS_ET_CETERA PLAIN",
     "pears plums et cetera remain"},
    {"read the FAQ", "PLAIN PLAIN LETTERS_SPELL", "read the f a q"},
    {"NASA launch", "LETTERS_SPELL PLAIN", "n a s a launch"},
    {"price is 3.14 total", "PLAIN PLAIN DECIMAL_3TOK PLAIN",
     "price is three point one four total"},
    {"run 0.5 km", "PLAIN DECIMAL_3TOK PLAIN", "run zero point five km"},
    {"7 cats", "CARDINAL_1TOK PLAIN", "seven cats"},
    {"chapter 12 begins", "PLAIN CARDINAL_1TOK PLAIN", "chapter twelve begins"},
    {"he bought 100 balloons", "PLAIN PLAIN CARDINAL_1TOK PLAIN",
     "he bought one hundred balloons"},
    {"Hello, world!", "PLAIN PUNCT_SILENT PLAIN PUNCT_SILENT", "hello world"},
    {"wait... now", "PLAIN PUNCT_SILENT PLAIN", "wait now"},
    {"St. Paul lives on Oak St.",
     "ST_AS_SAINT PLAIN PLAIN PLAIN PLAIN ST_AS_STREET",
     "saint paul lives on oak street"},
    {"the 2nd of 12 days", "PLAIN ORDINAL_SUFFIX PLAIN CARDINAL_1TOK PLAIN",
     "the second of twelve days"},
    {"save $5 by 5:15", "PLAIN CURRENCY_DOLLAR_PREFIX PLAIN TIME_COLON",
     "save five dollars by five fifteen"},
    {"8/9/1984 was a Tuesday", "DATE_SLASH_MDY PLAIN PLAIN PLAIN",
     "august ninth nineteen eighty four was a tuesday"},
    {"3 lb of sugar", "MEASURE_UNIT_SUFFIX PLAIN PLAIN", "three pounds of sugar"},
    {"72 hz hum", "MEASURE_UNIT_SUFFIX PLAIN", "seventy two hertz hum"},
    {"99 red balloons", "CARDINAL_1TOK PLAIN PLAIN", "ninety nine red balloons"},
    {"deadline 6/2021", "PLAIN DATE_SLASH_MY", "deadline june twenty twenty one"},
    {"June 1999 issue", "DATE_MONTH_YEAR PLAIN", "june nineteen ninety nine issue"},
    {"ticket 42A", "PLAIN CARDINAL_1TOK PLAIN", "ticket forty two a"},
    {"2/3 majority vote", "FRACTION_3TOK PLAIN PLAIN", "two thirds majority vote"},
    {"open 9:45 to 5:00", "PLAIN TIME_COLON PLAIN TIME_COLON",
     "open nine forty five to five o'clock"},
    {"donate $100 etc.", "PLAIN CURRENCY_DOLLAR_PREFIX ETC_AS_ET_CETERA",
     "donate one hundred dollars et cetera"},
    {"ABC song plays", "LETTERS_SPELL PLAIN PLAIN", "a b c song plays"},
    {"see docs.gov first", "PLAIN URL_DOTTED PLAIN", "see docs dot gov first"},
    {"a 1/4 share", "PLAIN FRACTION_3TOK PLAIN", "a one fourth share"},
    {"grew 10% last year", "PLAIN PERCENT_SUFFIX PLAIN PLAIN",
     "grew ten percent last year"},
    {"the 11th of May", "PLAIN ORDINAL_SUFFIX PLAIN PLAIN", "the eleventh of may"},
    {"Elm St. at 8:00", "PLAIN ST_AS_STREET PLAIN TIME_COLON",
     "elm street at eight o'clock"},
    {"Dr. Lee charges $40", "DR_AS_DOCTOR PLAIN PLAIN CURRENCY_DOLLAR_PREFIX",
     "doctor lee charges forty dollars"},
};

std::vector<TNExample> tile_rows(const GoldenRow* rows, std::size_t count,
                                 const RuleRegistry& registry) {
  std::vector<TNExample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const GoldenRow& row = rows[i];
    TNExample e;
    e.text = row.text;
    e.norm = row.norm;
    const TokenSequence seq = tokenize(e.text);
    std::istringstream names(row.rules);
    std::string name;
    int pos = 0;
    while (names >> name) {
      const int rule_id = registry.id_of(name);
      const auto span = registry.can_parse(rule_id, seq, pos);
      if (!span)
        fail_data("corpus: rule " + name + " does not apply in \"" + e.text +
                  "\" at token " + std::to_string(pos));
      e.rules.emplace_back(pos, rule_id);
      pos += *span;
    }
    if (pos != seq.n())
      fail_data("corpus: rules do not tile \"" + e.text + "\"");
    out.push_back(std::move(e));
  }
  return out;
}

// Ten sentence frames around a homograph slot {w} and a sense cue slot {c}.
struct HdFrame {
  const char* before;
  const char* between;
  const char* after;
};

const HdFrame kHdFrames[] = {
    {"the ", " was near the ", ""},
    {"a ", " by the ", " appeared"},
    {"we kept the ", " at the ", ""},
    {"that ", " and the ", " match"},
    {"his ", " sat on the ", ""},
    {"every ", " needs a ", ""},
    {"some ", " hid behind the ", ""},
    {"one ", " fell off the ", ""},
    {"my ", " looked like a ", ""},
    {"no ", " without a ", ""},
};

// One balanced block of examples for a single (homograph, label) pair. Spans
// are recorded while the sentence is assembled, so they are exact by
// construction; every sentence is pure ASCII (scalar offsets == byte offsets).
void append_hd_block(std::vector<HDExample>& out, const std::string& homograph,
                     const std::string& label, const std::string& cue) {
  for (const HdFrame& frame : kHdFrames) {
    HDExample e;
    e.homograph = homograph;
    e.label = label;
    e.sentence = frame.before;
    e.start = static_cast<int>(e.sentence.size());
    e.sentence += homograph;
    e.end = static_cast<int>(e.sentence.size());
    e.sentence += frame.between;
    e.sentence += cue;
    e.sentence += frame.after;
    out.push_back(std::move(e));
  }
}

struct DeskSense {
  const char* homograph;
  const char* label;
  const char* cue;
};

const DeskSense kDeskSenses[] = {
    {"bass", "bass_fish", "lake"},     {"bass", "bass_music", "amplifier"},
    {"bow", "bow_ribbon", "gift"},     {"bow", "bow_weapon", "arrow"},
    {"lead", "lead_metal", "pipe"},    {"lead", "lead_guide", "team"},
    {"wind", "wind_breeze", "storm"},  {"wind", "wind_crank", "clock"},
};

}  // namespace

std::vector<TNExample> golden_corpus(const RuleRegistry& registry) {
  return tile_rows(kGolden, std::size(kGolden), registry);
}

std::string golden_corpus_jsonl(const RuleRegistry& registry) {
  return tn_jsonl(golden_corpus(registry));
}

std::vector<TNExample> desk_tn_corpus(const RuleRegistry& registry) {
  return tile_rows(kDeskTn, std::size(kDeskTn), registry);
}

std::vector<POSExample> desk_pos_corpus() {
  // Each recurring word keeps a single tag across the whole set.
  static const std::pair<const char*, const char*> kRows[] = {
      {"the quick fox runs", "article adjective noun verb"},
      {"Mary is running fast", "name auxiliary participle adverb"},
      {"wow !", "interjection punctuation"},
      {"she reads the book", "pronoun verb article noun"},
      {"give up now", "verb particle adverb"},
      {"the FAQ is short", "article spelling auxiliary adjective"},
      {"he walks in the garden", "pronoun verb preposition article noun"},
      {"John and Anna sleep", "name conjunction name verb"},
      {"the old dog barks .", "article adjective noun verb punctuation"},
      {"they will sing", "pronoun auxiliary verb"},
      {"a bird sings quietly", "article noun verb adverb"},
      {"we run out", "pronoun verb particle"},
      {"oh , it broke", "interjection punctuation pronoun verb"},
      {"the broken chair fell", "article participle noun verb"},
      {"Peter sails near London", "name verb preposition name"},
      {"the letter was written slowly",
       "article noun auxiliary participle adverb"},
      {"can you see the river ?",
       "auxiliary pronoun verb article noun punctuation"},
      {"hey , the coffee is warm",
       "interjection punctuation article noun auxiliary adjective"},
      {"she must read it", "pronoun auxiliary verb pronoun"},
      {"NASA builds a boat", "spelling verb article noun"},
      {"the tall tree grows there", "article adjective noun verb adverb"},
      {"he never eats fish", "pronoun adverb verb noun"},
      {"alas , the door is closed",
       "interjection punctuation article noun auxiliary participle"},
      {"it sat by the window", "pronoun verb preposition article noun"},
      {"Anna writes a song", "name verb article noun"},
      {"the small cat sleeps here", "article adjective noun verb adverb"},
      {"you or we go", "pronoun conjunction pronoun verb"},
      {"the painted stone is heavy",
       "article participle noun auxiliary adjective"},
      {"hooray ! we won", "interjection punctuation pronoun verb"},
      {"a quiet child reads often", "article adjective noun verb adverb"},
      {"the USB is small", "article spelling auxiliary adjective"},
      {"Sara jumps over the road", "name verb preposition article noun"},
      {"turn off the light", "verb particle article noun"},
      {"the green boat sank", "article adjective noun verb"},
      {"he has a bright idea", "pronoun auxiliary article adjective noun"},
      {"while she sang , he slept",
       "conjunction pronoun verb punctuation pronoun verb"},
      {"the dog ran through the house",
       "article noun verb preposition article noun"},
      {"put down the heavy book", "verb particle article adjective noun"},
      {"ABC is easy", "spelling auxiliary adjective"},
      {"John was sleeping in Rome", "name auxiliary participle preposition name"},
      {"but they came soon", "conjunction pronoun verb adverb"},
      {"the fallen tree blocks a road",
       "article participle noun verb article noun"},
      {"we drink warm coffee at home",
       "pronoun verb adjective noun preposition noun"},
      {"oh , the bird flew off",
       "interjection punctuation article noun verb particle"},
      {"can Peter swim ?", "auxiliary name verb punctuation"},
      {"the DIY kit arrived", "article spelling noun verb"},
      {"she often sees him there", "pronoun adverb verb pronoun adverb"},
      {"an old house stood near Paris",
       "article adjective noun verb preposition name"},
      {"it is very quiet", "pronoun auxiliary adverb adjective"},
      {"because he was tired , we left",
       "conjunction pronoun auxiliary adjective punctuation pronoun verb"},
  };
  std::vector<POSExample> out;
  out.reserve(std::size(kRows));
  for (const auto& [words, tags] : kRows) {
    POSExample e;
    std::istringstream ws(words), ts(tags);
    std::string item;
    while (ws >> item) e.words.push_back(item);
    while (ts >> item) e.tags.push_back(item);
    if (e.words.size() != e.tags.size())
      fail_data(std::string("tag corpus: count mismatch in \"") + words + "\"");
    out.push_back(std::move(e));
  }
  return out;
}

HomographLexicon desk_lexicon() {
  HomographLexicon lex;
  lex.add("bass", {"bass_fish", "bass_music"});
  lex.add("bow", {"bow_ribbon", "bow_weapon"});
  lex.add("lead", {"lead_metal", "lead_guide"});
  lex.add("wind", {"wind_breeze", "wind_crank"});
  return lex;
}

std::vector<HDExample> desk_hd_corpus(const HomographLexicon& lexicon) {
  std::vector<HDExample> out;
  out.reserve(std::size(kDeskSenses) * std::size(kHdFrames));
  for (const DeskSense& sense : kDeskSenses) {
    lexicon.label_index(sense.homograph, sense.label);
    append_hd_block(out, sense.homograph, sense.label, sense.cue);
  }
  return out;
}

HomographLexicon full_scale_lexicon() {
  // 50 attested English homographs; the first two carry three pronunciations.
  static const char* kSeed[] = {
      "bass",     "bow",      "lead",     "wind",      "tear",     "live",
      "read",     "close",    "desert",   "object",    "present",  "record",
      "produce",  "project",  "minute",   "content",   "contract", "convert",
      "permit",   "rebel",    "refuse",   "subject",   "suspect",  "conduct",
      "console",  "digest",   "escort",   "export",    "import",   "incline",
      "increase", "insert",   "insult",   "perfect",   "polish",   "protest",
      "recall",   "reject",   "resume",   "separate",  "sow",      "dove",
      "wound",    "row",      "invalid",  "moderate",  "graduate", "alternate",
      "excuse",   "conflict",
  };
  static const char* kOnsets[] = {"bl", "br", "cl", "cr", "dr", "fl", "gl", "gr",
                                  "pl", "pr", "sk", "sl", "sn", "sp", "st", "tr"};
  static const char* kRimes[] = {"ane", "ime", "ode", "ule", "arn", "ist", "oft"};

  HomographLexicon lex;
  std::size_t added = 0;
  auto add_word = [&](const std::string& word) {
    const int labels = added < 2 ? 3 : 2;
    std::vector<std::string> ids = {word + "_a", word + "_b"};
    if (labels == 3) ids.push_back(word + "_c");
    lex.add(word, ids);
    ++added;
  };
  for (const char* word : kSeed) add_word(word);
  for (const char* onset : kOnsets)
    for (const char* rime : kRimes) {
      if (added >= 162) break;
      add_word(std::string(onset) + rime);
    }
  if (lex.entries().size() != 162)
    fail_data("full-scale lexicon must hold 162 homographs");
  return lex;
}

std::vector<HDExample> full_scale_hd_corpus(const HomographLexicon& lexicon) {
  // Distinct cue nouns per label, drawn from a deterministic syllable grid.
  static const char* kCueOnsets[] = {"m", "b", "t", "k", "v", "z", "n", "g", "h", "j"};
  static const char* kCueMids[] = {"ar", "el", "in", "or", "un", "es", "ol", "ad"};
  static const char* kCueEnds[] = {"a", "o", "e", "u", "i"};
  std::vector<std::string> cues;
  cues.reserve(400);
  for (const char* onset : kCueOnsets)
    for (const char* mid : kCueMids)
      for (const char* end : kCueEnds)
        cues.push_back(std::string(onset) + mid + end);

  std::vector<HDExample> out;
  out.reserve(lexicon.total_labels() * std::size(kHdFrames));
  std::size_t cue_at = 0;
  for (const HomographEntry& entry : lexicon.entries())
    for (const std::string& label : entry.labels)
      append_hd_block(out, entry.key, label, cues.at(cue_at++));
  return out;
}

}  // namespace ttsfe
