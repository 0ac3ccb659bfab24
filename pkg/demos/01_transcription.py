"""
Transcribing words into IPA
===========================

A mapping table is an ordered list of spelling rules. Transcription scans a
word left to right and always applies the longest rule that matches.
"""

from pathlib import Path

from gazelab.g2p import load_mapping, parse_mapping, transcribe

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

# A tiny table written inline. "sh" beats "s" because it is longer.
table = parse_mapping("s\ts\nsh\tʃ\ni\tɪ\np\tp\n", "toy")
print(transcribe("ship", table))

# Characters without a rule pass through unchanged and are flagged.
ipa = transcribe("shiz", table)
print(ipa, "unmapped:", ipa.had_unmapped)

# The shipped English and German tables.
en = load_mapping(FIXTURES / "mappings" / "en.map")
de = load_mapping(FIXTURES / "mappings" / "de.map")
for word, table in [("watch", en), ("sheep", en), ("schläft", de), ("weiß", de)]:
    ipa = transcribe(word, table)
    print(f"{word:10s} {' '.join(ipa.phonemes):16s} vowels={sum(map(table.is_vowel, ipa))}")
