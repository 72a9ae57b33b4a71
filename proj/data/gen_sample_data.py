#!/usr/bin/env python3
"""Regenerates the shipped sample data.

  hebrew_translit.tsv  longest-match grapheme table (Israeli reading)
  joshua24.tsv         Joshua 24:29-30,33 in the corpus interchange format

The table keys are NFC clusters: NFC moves vowel points in front of dagesh
and shin/sin dots, so every consonant+mark combination is spelled out.
The translit column of the corpus is filled by the simple longest-match
routine below, which is kept independent of the C++ implementation.
"""

import pathlib
import unicodedata

HERE = pathlib.Path(__file__).resolve().parent


def nfc(s):
    return unicodedata.normalize("NFC", s)


DAGESH = "ּ"
SHIN_DOT = "ׁ"
SIN_DOT = "ׂ"
MAQAF = "־"
YOD = "י"
VAV = "ו"
HOLAM = "ֹ"

VOWELS = {
    "ְ": "",   # shewa
    "ֱ": "e",  # hataf segol
    "ֲ": "a",  # hataf patah
    "ֳ": "o",  # hataf qamats
    "ִ": "i",  # hiriq
    "ֵ": "e",  # tsere
    "ֶ": "e",  # segol
    "ַ": "a",  # patah
    "ָ": "a",  # qamats
    "ֹ": "o",  # holam
    "ֺ": "o",  # holam haser for vav
    "ֻ": "u",  # qubuts
}

# (letter, plain, with dagesh or None when the letter takes no dagesh)
CONSONANTS = [
    ("א", "", None),      # alef
    ("ב", "v", "b"),      # bet
    ("ג", "g", "g"),      # gimel
    ("ד", "d", "d"),      # dalet
    ("ה", "h", None),     # he
    ("ו", "v", "v"),      # vav
    ("ז", "z", "z"),      # zayin
    ("ח", "ch", None),    # het
    ("ט", "t", "t"),      # tet
    ("י", "y", "y"),      # yod
    ("ך", "kh", "k"),     # final kaf
    ("כ", "kh", "k"),     # kaf
    ("ל", "l", "l"),      # lamed
    ("ם", "m", None),     # final mem
    ("מ", "m", "m"),      # mem
    ("ן", "n", None),     # final nun
    ("נ", "n", "n"),      # nun
    ("ס", "s", "s"),      # samekh
    ("ע", "", None),      # ayin
    ("ף", "f", None),     # final pe
    ("פ", "f", "p"),      # pe
    ("ץ", "ts", None),    # final tsade
    ("צ", "ts", "ts"),    # tsade
    ("ק", "k", "k"),      # qof
    ("ר", "r", None),     # resh
    ("ש", "sh", "sh"),    # shin (undotted read as shin)
    ("ת", "t", "t"),      # tav
]

MATER_VOWELS = {"ִ", "ֵ", "ֶ"}  # hiriq, tsere, segol + yod


def build_table():
    table = {}
    for letter, plain, doubled in CONSONANTS:
        dots = [("", None)]
        if letter == "ש":
            dots = [("", None), (SHIN_DOT, "sh"), (SIN_DOT, "s")]
        dageshes = [("", plain)]
        if doubled is not None:
            dageshes.append((DAGESH, doubled))
        for dot, dot_value in dots:
            for dagesh, base_value in dageshes:
                cons_value = dot_value if dot_value is not None else base_value
                if dot_value is not None and dagesh:
                    cons_value = dot_value
                for vowel in [""] + list(VOWELS):
                    key = nfc(letter + dagesh + dot + vowel)
                    value = cons_value + (VOWELS[vowel] if vowel else "")
                    table[key] = value
                    if vowel in MATER_VOWELS:
                        table[key + YOD] = value
    for vowel, value in VOWELS.items():
        table[vowel] = value
    table[DAGESH] = ""
    table[SHIN_DOT] = ""
    table[SIN_DOT] = ""
    table[MAQAF] = "-"
    # holam male and shureq read as vowels, not as consonantal vav
    table[nfc(VAV + HOLAM)] = "o"
    table[nfc(VAV + DAGESH)] = "u"
    table[nfc("יְהוָה")] = "adonay"
    return table


def transliterate(text, table):
    max_len = max(len(k) for k in table)
    out = []
    i = 0
    while i < len(text):
        for n in range(min(max_len, len(text) - i), 0, -1):
            piece = text[i:i + n]
            if piece in table:
                out.append(table[piece])
                i += n
                break
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


# clause_id -> (sentence, label, ctc, tab_depth, mother)
CLAUSES = {
    "c1": ("s1", "Way0", "477", 0, None),
    "c2": ("s1", "WayX", "477", 0, "c1"),
    "c3": ("s2", "Way0", "477", 0, "c2"),
    "c4": ("s2", "NmCl", "10", 2, "c3"),
    "c5": ("s3", "XQt", "427", 0, "c3"),
    "c6": ("s4", "Way0", "472", 0, "c5"),
    "c7": ("s4", "xQt0", "12", 1, "c6"),
}

# phrase_id -> (clause, type, function)
PHRASES = {
    "p1": ("c1", "CjP", "Conj"),
    "p2": ("c1", "VP", "Pred"),
    "p3": ("c1", "PP", "Time"),
    "p4": ("c2", "CjP", "Conj"),
    "p5": ("c2", "VP", "Pred"),
    "p6": ("c2", "NP", "Subj"),
    "p7": ("c2", "NP", "Adju"),
    "p8": ("c3", "CjP", "Conj"),
    "p9": ("c3", "VP", "Pred"),
    "p10": ("c3", "PP", "Objc"),
    "p11": ("c3", "PP", "Cmpl"),
    "p12": ("c3", "PP", "Loca"),
    "p13": ("c4", "CjP", "Rela"),
    "p14": ("c4", "PP", "PreC"),
    "p15": ("c4", "PP", "Loca"),
    "p16": ("c5", "CjP", "Conj"),
    "p17": ("c5", "NP", "Subj"),
    "p18": ("c5", "VP", "Pred"),
    "p19": ("c6", "CjP", "Conj"),
    "p20": ("c6", "VP", "Pred"),
    "p21": ("c6", "PP", "Objc"),
    "p22": ("c6", "PP", "Loca"),
    "p23": ("c7", "CjP", "Rela"),
    "p24": ("c7", "VP", "Pred"),
    "p25": ("c7", "PP", "Cmpl"),
    "p26": ("c7", "PP", "Loca"),
}

# lexeme -> (gloss, pos)
LEX = {
    "W": ("and", "conjunction"),
    "HJH[": ("be", "verb"),
    ">XR/": ("after", "preposition"),
    "H": ("the", "article"),
    "DBR/": ("word", "noun"),
    ">LH": ("these", "pronoun"),
    "MWT[": ("die", "verb"),
    "JHWC</": ("Joshua", "proper_noun"),
    "BN/": ("son", "noun"),
    "NWN/": ("Nun", "proper_noun"),
    "<BD/": ("servant", "noun"),
    "JHWH/": ("YHWH", "proper_noun"),
    "M>H/": ("hundred", "numeral"),
    "<FR/": ("ten", "numeral"),
    "CNH/": ("year", "noun"),
    "QBR[": ("bury", "verb"),
    ">T": ("object marker", "preposition"),
    "B": ("in", "preposition"),
    "GBWL/": ("boundary", "noun"),
    "NXLH/": ("inheritance", "noun"),
    "TMNT_SRX/": ("Timnath-serah", "proper_noun"),
    ">CR": ("which", "conjunction"),
    "HR/": ("mountain", "noun"),
    ">PRJM/": ("Ephraim", "proper_noun"),
    "MN": ("from", "preposition"),
    "YPWN/": ("north", "noun"),
    "L": ("to", "preposition"),
    "G<C/": ("Gaash", "proper_noun"),
    ">L<ZR/": ("Eleazar", "proper_noun"),
    ">HRN/": ("Aaron", "proper_noun"),
    "GB<H/": ("hill", "noun"),
    "PJNXS/": ("Phinehas", "proper_noun"),
    "NTN[": ("give", "verb"),
}

# verse, surface, lexeme, stem, tense, person, gender, number, state,
# verb classes, phrase
WORDS = [
    (29, "וַ", "W", "-", "-", "-", "-", "-", "-", "-", "p1"),
    (29, "יְהִי", "HJH[", "qal", "wayyiqtol", "3", "m", "sg", "-", "III-he", "p2"),
    (29, "אַחֲרֵי", ">XR/", "-", "-", "-", "-", "-", "-", "-", "p3"),
    (29, "הַ", "H", "-", "-", "-", "-", "-", "-", "-", "p3"),
    (29, "דְּבָרִים", "DBR/", "-", "-", "-", "m", "pl", "absolute", "-", "p3"),
    (29, "הָ", "H", "-", "-", "-", "-", "-", "-", "-", "p3"),
    (29, "אֵלֶּה", ">LH", "-", "-", "-", "common", "pl", "-", "-", "p3"),
    (29, "וַ", "W", "-", "-", "-", "-", "-", "-", "-", "p4"),
    (29, "יָּמָת", "MWT[", "qal", "wayyiqtol", "3", "m", "sg", "-", "hollow", "p5"),
    (29, "יְהוֹשֻׁעַ", "JHWC</", "-", "-", "-", "m", "sg", "absolute", "-", "p6"),
    (29, "בִּן", "BN/", "-", "-", "-", "m", "sg", "construct", "-", "p6"),
    (29, "נוּן", "NWN/", "-", "-", "-", "m", "sg", "absolute", "-", "p6"),
    (29, "עֶבֶד", "<BD/", "-", "-", "-", "m", "sg", "construct", "-", "p6"),
    (29, "יְהוָה", "JHWH/", "-", "-", "-", "m", "sg", "absolute", "-", "p6"),
    (29, "בֶּן", "BN/", "-", "-", "-", "m", "sg", "construct", "-", "p7"),
    (29, "מֵאָה", "M>H/", "-", "-", "-", "f", "sg", "absolute", "-", "p7"),
    (29, "וָ", "W", "-", "-", "-", "-", "-", "-", "-", "p7"),
    (29, "עֶשֶׂר", "<FR/", "-", "-", "-", "m", "sg", "absolute", "-", "p7"),
    (29, "שָׁנִים", "CNH/", "-", "-", "-", "f", "pl", "absolute", "-", "p7"),
    (30, "וַ", "W", "-", "-", "-", "-", "-", "-", "-", "p8"),
    (30, "יִּקְבְּרוּ", "QBR[", "qal", "wayyiqtol", "3", "m", "pl", "-", "strong", "p9"),
    (30, "אֹתוֹ", ">T", "-", "-", "-", "-", "-", "-", "-", "p10"),
    (30, "בִּ", "B", "-", "-", "-", "-", "-", "-", "-", "p11"),
    (30, "גְבוּל", "GBWL/", "-", "-", "-", "m", "sg", "construct", "-", "p11"),
    (30, "נַחֲלָתוֹ", "NXLH/", "-", "-", "-", "f", "sg", "construct", "-", "p11"),
    (30, "בְּ", "B", "-", "-", "-", "-", "-", "-", "-", "p12"),
    (30, "תִמְנַת־סֶרַח", "TMNT_SRX/", "-", "-", "-", "f", "sg", "absolute", "-", "p12"),
    (30, "אֲשֶׁר", ">CR", "-", "-", "-", "-", "-", "-", "-", "p13"),
    (30, "בְּ", "B", "-", "-", "-", "-", "-", "-", "-", "p14"),
    (30, "הַר", "HR/", "-", "-", "-", "m", "sg", "construct", "-", "p14"),
    (30, "אֶפְרָיִם", ">PRJM/", "-", "-", "-", "m", "sg", "absolute", "-", "p14"),
    (30, "מִ", "MN", "-", "-", "-", "-", "-", "-", "-", "p15"),
    (30, "צְּפוֹן", "YPWN/", "-", "-", "-", "f", "sg", "absolute", "-", "p15"),
    (30, "לְ", "L", "-", "-", "-", "-", "-", "-", "-", "p15"),
    (30, "הַר", "HR/", "-", "-", "-", "m", "sg", "construct", "-", "p15"),
    (30, "גָּעַשׁ", "G<C/", "-", "-", "-", "m", "sg", "absolute", "-", "p15"),
    (33, "וְ", "W", "-", "-", "-", "-", "-", "-", "-", "p16"),
    (33, "אֶלְעָזָר", ">L<ZR/", "-", "-", "-", "m", "sg", "absolute", "-", "p17"),
    (33, "בֶּן", "BN/", "-", "-", "-", "m", "sg", "construct", "-", "p17"),
    (33, "אַהֲרֹן", ">HRN/", "-", "-", "-", "m", "sg", "absolute", "-", "p17"),
    (33, "מֵת", "MWT[", "qal", "qatal", "3", "m", "sg", "-", "hollow", "p18"),
    (33, "וַ", "W", "-", "-", "-", "-", "-", "-", "-", "p19"),
    (33, "יִּקְבְּרוּ", "QBR[", "qal", "wayyiqtol", "3", "m", "pl", "-", "strong", "p20"),
    (33, "אֹתוֹ", ">T", "-", "-", "-", "-", "-", "-", "-", "p21"),
    (33, "בְּ", "B", "-", "-", "-", "-", "-", "-", "-", "p22"),
    (33, "גִבְעַת", "GB<H/", "-", "-", "-", "f", "sg", "construct", "-", "p22"),
    (33, "פִּינְחָס", "PJNXS/", "-", "-", "-", "m", "sg", "absolute", "-", "p22"),
    (33, "בְּנוֹ", "BN/", "-", "-", "-", "m", "sg", "construct", "-", "p22"),
    (33, "אֲשֶׁר", ">CR", "-", "-", "-", "-", "-", "-", "-", "p23"),
    (33, "נִתַּן", "NTN[", "niphal", "qatal", "3", "m", "sg", "-", "I-nun", "p24"),
    (33, "לוֹ", "L", "-", "-", "-", "-", "-", "-", "-", "p25"),
    (33, "בְּ", "B", "-", "-", "-", "-", "-", "-", "-", "p26"),
    (33, "הַר", "HR/", "-", "-", "-", "m", "sg", "construct", "-", "p26"),
    (33, "אֶפְרָיִם", ">PRJM/", "-", "-", "-", "m", "sg", "absolute", "-", "p26"),
]


def span(monads):
    return min(monads), max(monads)


def main():
    table = build_table()
    with open(HERE / "hebrew_translit.tsv", "w", encoding="utf-8") as f:
        f.write("# Biblical Hebrew -> romanization, Israeli reading.\n")
        f.write("# Generated by gen_sample_data.py; keys are NFC clusters.\n")
        for key in sorted(table):
            f.write(f"{key}\t{table[key]}\n")

    lines = ["#corpus v1 books=Genesis,Exodus,Leviticus,Numbers,"
             "Deuteronomy,Joshua,Judges"]
    phrase_monads = {}
    for monad, row in enumerate(WORDS, start=1):
        (verse, surface, lex, stem, tense, person, gender, number, state,
         classes, phrase) = row
        surface = nfc(surface)
        gloss, pos = LEX[lex]
        translit = transliterate(surface, table)
        lines.append("\t".join([
            "W", str(monad), "Joshua", "24", str(verse), surface, translit,
            lex, gloss, pos, stem, tense, person, gender, number, state,
            classes, phrase]))
        phrase_monads.setdefault(phrase, []).append(monad)

    clause_monads = {}
    for pid, (cid, ptype, func) in PHRASES.items():
        lo, hi = span(phrase_monads[pid])
        lines.append("\t".join(["P", pid, cid, str(lo), str(hi), ptype, func]))
        clause_monads.setdefault(cid, []).extend(phrase_monads[pid])

    sentence_monads = {}
    for cid, (sid, label, ctc, depth, mother) in CLAUSES.items():
        lo, hi = span(clause_monads[cid])
        lines.append("\t".join(["C", cid, sid, str(lo), str(hi), label, ctc,
                                str(depth), mother or "-"]))
        sentence_monads.setdefault(sid, []).extend(clause_monads[cid])

    for sid, monads in sentence_monads.items():
        lo, hi = span(monads)
        lines.append("\t".join(["S", sid, str(lo), str(hi)]))

    with open(HERE / "joshua24.tsv", "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
