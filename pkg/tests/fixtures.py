# -*- coding: utf-8 -*-
"""Hand-written fixture data shared by the unit and acceptance suites.

Expected outputs were worked out by hand before the implementation was
written; they are the contract, not a record of observed behavior.
"""

# (raw, expected normalized text)
NORMALIZATION_FIXTURES = [
    ("RT @usr check https://t.co/x now", "MENTION check URL now"),
    ("", ""),
    ("call 010-1234-5678 today", "call NUMBER today"),
    ("RT RT @a hello out there", "MENTION hello out there"),
    ("visit www.example.com/page?q=1 ok", "visit URL ok"),
    ("meeting at 12:30 tomorrow", "meeting at tomorrow"),
    ("posted 2016-08-19 12:34:56 by @me", "posted by MENTION"),
    ("  spaces\t\tand\nnewlines  ", "spaces and newlines"),
    ("no changes here", "no changes here"),
    ("RT", ""),
    ("call +82-10-1234-5678 now", "call NUMBER now"),
    ("@user1 @user2: hello", "MENTION MENTION: hello"),
    ("check https://a.b/c and http://d.e", "check URL and URL"),
    ("time 9:05 AM sharp", "time sharp"),
    ("RT @news: 2016-09-23 breaking", "MENTION: breaking"),
    ("점심 12:00에 보자", "점심 에 보자"),
    ("자살 관련 트윗 RT @한국인 https://t.co/샘플", "자살 관련 트윗 RT MENTION URL"),
    ("전화 (02) 123-4567 하세요", "전화 NUMBER 하세요"),
    ("100% pure 2016 vibes", "100% pure 2016 vibes"),
    ("done 23:59:59 exactly", "done exactly"),
]

# (normalized text, expected token list)
TOKENIZE_FIXTURES = [
    ("MENTION check URL now", ["MENTION", "check", "URL", "now"]),
    ("a  b", ["a", "b"]),
    ("end.", ["end"]),
    ("Hello, world!", ["Hello", "world"]),
    ("'quoted'", ["quoted"]),
    ("(parens) [brackets]", ["parens", "brackets"]),
    ("real-time data", ["real-time", "data"]),
    ("snake_case stays", ["snake_case", "stays"]),
    ("...", []),
    ("URL, MENTION.", ["URL", "MENTION"]),
    ("don't stop", ["don't", "stop"]),
    ("NUMBER!!", ["NUMBER"]),
    ("one", ["one"]),
    ("", []),
    ("  leading and trailing  ", ["leading", "and", "trailing"]),
    ("자살은 아니다.", ["자살은", "아니다"]),
    ("C++ rocks", ["C++", "rocks"]),
    ("9:05", ["9:05"]),
    ("say “yes” now", ["say", "yes", "now"]),
    ("mixed,punct;here", ["mixed,punct;here"]),
]

# tests/data/records50.tsv, recounted by the independent script in
# oracles.recount_fixture before the implementation existed.
RECORDS50 = "records50.tsv"
RECORDS50_SURVIVING_DOCS = 43
RECORDS50_VOCAB_SIZE = 245
RECORDS50_LABELED = 13
RECORDS50_DROPPED = ["r03", "r07", "r16", "r20", "r36", "r41", "r49"]

# 12-unit, 2-coder, 3-label reliability fixture. Worked by hand:
# agreeing units give o[x,x]=o[y,y]=o[z,z]=6; the three disagreeing units
# put 1 in each off-diagonal cell pair; marginals n_x=n_y=n_z=8, n=24.
# D_o = 6/24 = 0.25, D_e = (3*2*8*8)/(24*23) = 384/552,
# alpha = 1 - 0.25*552/384 = 0.640625.
ALPHA_UNITS = [f"u{i}" for i in range(12)]
ALPHA_CODER_A = ["x", "x", "x", "y", "y", "y", "z", "z", "z", "x", "y", "z"]
ALPHA_CODER_B = ["x", "x", "y", "y", "y", "z", "z", "z", "x", "x", "y", "z"]
ALPHA_EXPECTED = 0.640625
