#!/usr/bin/env python3
"""Writes the small CoNLL-U fixtures and the mock scoring table.

Run from the repository root. Output goes to crates/core/fixtures/.
"""
import json
import os

OUT = "crates/core/fixtures"

TRAIN_EN = [
    "Chahine/PROPN said/VERB her/PRON immediate/ADJ family/NOUN spent/VERB about/ADV $/SYM 20,000/NUM to/PART return/VERB to/ADP Detroit/PROPN via/ADP Syria/PROPN and/CCONJ Jordan/PROPN ./PUNCT",
    "Welcome/INTJ Darin/PROPN !/PUNCT",
    "you/PRON can/AUX view/VERB at/ADP dresscod.com/X",
    "They/PRON work/VERB on/ADP Wall/PROPN Street/PROPN ,/PUNCT after/ADV all/ADV ,/PUNCT so/ADV when/ADV they/PRON hear/VERB a/DET company/NOUN who's/PRON stated/VERB goals/NOUN include/VERB \"/PUNCT Do/AUX n't/PART be/AUX evil/ADJ ,/PUNCT \"/PUNCT they/PRON imagine/VERB a/DET company/NOUN who's/PRON eventually/ADJ history/NOUN will/AUX be/VERB \"/PUNCT Do/AUX n't/PART be/AUX profitable/ADJ ./PUNCT \"/PUNCT",
    "It/PRON 's/AUX not/PART quite/ADV as/ADV freewheeling/ADJ an/DET environment/NOUN as/SCONJ you/PRON 'd/AUX imagine/VERB :/PUNCT Sergey/PROPN Brin/PROPN has/AUX actually/ADV created/VERB a/DET mathematical/ADJ '/PUNCT proof/NOUN '/PUNCT that/SCONJ the/DET company/NOUN 's/PART self/NOUN -/PUNCT driven/VERB research/NOUN strategy/NOUN ,/PUNCT which/PRON gives/VERB employees/NOUN one/NUM day/NOUN a/DET week/NOUN to/PART do/VERB research/NOUN projects/NOUN on/ADP their/PRON own/ADJ ,/PUNCT is/AUX a/DET good/ADJ ,/PUNCT respectable/ADJ idea/NOUN ./PUNCT",
    "Read/VERB the/DET entire/ADJ article/NOUN ;/PUNCT there/PRON 's/VERB a/DET punchline/NOUN ,/PUNCT too/ADV ./PUNCT",
    "My/PRON opinion/NOUN piece/NOUN on/ADP the/DET implications/NOUN of/ADP Arafat/PROPN 's/PART passing/NOUN for/ADP al/PROPN -/PUNCT Qaeda/PROPN has/AUX appeared/VERB at/ADP Newsday/PROPN ./PUNCT",
    "And/CCONJ if/SCONJ you/PRON send/VERB me/PRON a/DET story/NOUN ,/PUNCT that/PRON would/AUX be/AUX great/ADJ !/PUNCT",
    "Antigua/PROPN was/AUX awesome/ADJ ./PUNCT",
    "The/DET food/NOUN is/AUX fresh/ADJ and/CCONJ taste/VERB great/ADJ ./PUNCT",
    "Now/ADV I/PRON have/VERB wife/NOUN and/CCONJ son/NOUN ./PUNCT",
    "I/PRON survived/VERB it/PRON without/ADP a/DET problem/NOUN ./PUNCT",
    "Yes/INTJ ,/PUNCT the/DET Cyclone/PROPN is/AUX almost/ADV certain/ADJ to/PART lose/VERB strength/NOUN as/SCONJ it/PRON surges/VERB over/ADP land/NOUN ./PUNCT",
    "----==/SYM Posted/VERB via/ADP Newsfeed.Com/PROPN -/PUNCT Unlimited/ADJ -/PUNCT Uncensored/ADJ -/PUNCT Secure/ADJ Usenet/PROPN News/PROPN ==----/SYM",
    "We/PRON met/VERB two/NUM old/ADJ friends/NOUN yesterday/NOUN ./PUNCT",
]

EVAL = {
    "en": [
        "The/DET dog/NOUN barked/VERB loudly/ADV ./PUNCT",
        "She/PRON will/AUX visit/VERB Paris/PROPN in/ADP May/PROPN ./PUNCT",
        "Oh/INTJ ,/PUNCT that/PRON is/AUX a/DET great/ADJ idea/NOUN !/PUNCT",
        "I/PRON bought/VERB three/NUM apples/NOUN and/CCONJ a/DET pear/NOUN ./PUNCT",
        "He/PRON did/AUX n't/PART know/VERB because/SCONJ nobody/PRON told/VERB him/PRON ./PUNCT",
        "Email/VERB me/PRON at/ADP info@example.com/X :)/SYM",
        "Viel/X Erfolg/X !/PUNCT",
        "The/DET old/ADJ man/NOUN walked/VERB home/ADV slowly/ADV ./PUNCT",
    ],
    "de": [
        "Viel/ADJ Erfolg/NOUN !/PUNCT",
        "Der/DET Hund/NOUN schläft/VERB im/ADP Garten/NOUN ./PUNCT",
        "Ich/PRON habe/AUX das/DET Buch/NOUN gelesen/VERB ./PUNCT",
        "Berlin/PROPN ist/AUX eine/DET große/ADJ Stadt/NOUN ./PUNCT",
        "Er/PRON kommt/VERB nicht/PART ,/PUNCT weil/SCONJ er/PRON krank/ADJ ist/AUX ./PUNCT",
        "Wir/PRON kaufen/VERB zwei/NUM Brote/NOUN und/CCONJ Milch/NOUN ./PUNCT",
    ],
    "nl": [
        "De/DET kat/NOUN slaapt/VERB op/ADP de/DET bank/NOUN ./PUNCT",
        "Amsterdam/PROPN is/AUX een/DET mooie/ADJ stad/NOUN ./PUNCT",
        "Ik/PRON heb/AUX twee/NUM fietsen/NOUN gekocht/VERB ./PUNCT",
        "Hij/PRON zegt/VERB dat/SCONJ het/PRON regent/VERB ./PUNCT",
        "Ja/INTJ ,/PUNCT ik/PRON kom/VERB morgen/ADV en/CCONJ jij/PRON ook/ADV ./PUNCT",
    ],
    "ru": [
        "Я/PRON люблю/VERB Москву/PROPN ./PUNCT",
        "Большой/ADJ дом/NOUN стоит/VERB на/ADP горе/NOUN ./PUNCT",
        "Он/PRON не/PART знал/VERB ,/PUNCT что/SCONJ делать/VERB ./PUNCT",
        "Мы/PRON купили/VERB три/NUM книги/NOUN и/CCONJ журнал/NOUN ./PUNCT",
        "Вчера/ADV было/AUX холодно/ADJ ./PUNCT",
    ],
    "zh": [
        "我/PRON 喜欢/VERB 北京/PROPN 。/PUNCT",
        "这/DET 本/NOUN 书/NOUN 很/ADV 好/ADJ 。/PUNCT",
        "他/PRON 买/VERB 了/AUX 三/NUM 个/NOUN 苹果/NOUN 。/PUNCT",
        "因为/SCONJ 下雨/VERB ，/PUNCT 我们/PRON 在/ADP 家/NOUN 。/PUNCT",
        "你/PRON 和/CCONJ 我/PRON 都/ADV 是/AUX 学生/NOUN 。/PUNCT",
    ],
    "el": [
        "Ο/DET σκύλος/NOUN τρέχει/VERB γρήγορα/ADV ./PUNCT",
        "Η/DET Αθήνα/PROPN είναι/AUX μεγάλη/ADJ πόλη/NOUN ./PUNCT",
        "Δεν/PART ξέρω/VERB αν/SCONJ έρχεται/VERB ./PUNCT",
    ],
    "fa": [
        "من/PRON کتاب/NOUN را/ADP خواندم/VERB ./PUNCT",
        "تهران/PROPN شهر/NOUN بزرگی/ADJ است/AUX ./PUNCT",
        "او/PRON دو/NUM سیب/NOUN و/CCONJ یک/NUM پرتقال/NOUN خرید/VERB ./PUNCT",
    ],
    "hi": [
        "राम/PROPN घर/NOUN गया/VERB ।/PUNCT",
        "यह/DET किताब/NOUN बहुत/ADV अच्छी/ADJ है/AUX ।/PUNCT",
        "मैं/PRON नहीं/PART जानता/VERB कि/SCONJ वह/PRON कहाँ/ADV है/AUX ।/PUNCT",
    ],
}

# Deliberate mistakes of the mock model: surface -> wrongly preferred tag.
CONFUSIONS = {
    "loudly": "ADJ",
    "May": "AUX",
    "Oh": "PROPN",
    "Email": "NOUN",
    ":)": "PUNCT",
    "home": "NOUN",
    "Viel": "ADJ",
    "Erfolg": "NOUN",
    "im": "DET",
    "ist": "VERB",
    "morgen": "NOUN",
    "Вчера": "NOUN",
    "холодно": "ADV",
    "了": "PART",
    "本": "NUM",
    "Ο": "PRON",
    "را": "PART",
    "कि": "CCONJ",
}

TAGS = "ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM VERB X".split()


def split(line):
    out = []
    for item in line.split(" "):
        word, tag = item.rsplit("/", 1)
        assert tag in TAGS, item
        out.append((word, tag))
    return out


def conllu(lang, lines):
    buf = []
    for n, line in enumerate(lines, 1):
        toks = split(line)
        buf.append(f"# sent_id = {lang}-{n:03d}")
        buf.append("# text = " + " ".join(w for w, _ in toks))
        for i, (w, t) in enumerate(toks, 1):
            buf.append(f"{i}\t{w}\t_\t{t}\t_\t_\t_\t_\t_\t_")
        buf.append("")
    return "\n".join(buf) + "\n"


def main():
    os.makedirs(f"{OUT}/corpus", exist_ok=True)
    with open(f"{OUT}/corpus/train_en.conllu", "w") as f:
        f.write(conllu("train-en", TRAIN_EN))
    rows = {}
    for lang, lines in EVAL.items():
        with open(f"{OUT}/corpus/{lang}.conllu", "w") as f:
            f.write(conllu(lang, lines))
        for line in lines:
            for word, gold in split(line):
                best = CONFUSIONS.get(word, gold)
                row = {}
                for k, tag in enumerate(TAGS):
                    if tag == best:
                        row[tag] = -0.1
                    elif tag == gold:
                        row[tag] = -1.2
                    else:
                        row[tag] = round(-4.0 - 0.25 * ((k + len(word)) % 7), 2)
                rows[word] = row
    table = {"unknown_token": "uniform", "rows": dict(sorted(rows.items()))}
    with open(f"{OUT}/mock_table.json", "w") as f:
        json.dump(table, f, ensure_ascii=False, indent=1, sort_keys=False)
        f.write("\n")


if __name__ == "__main__":
    main()
