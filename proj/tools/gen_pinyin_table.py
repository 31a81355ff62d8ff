#!/usr/bin/env python3
# Copyright (c) 2026 The coc-asr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/pinyin.tsv from pypinyin's single-character dictionary.

One reading per character (pypinyin's default, i.e. the most frequent one),
lowercase, tone-numbered, neutral tone written as 5, u-umlaut written as v.

  pip install pypinyin
  python3 tools/gen_pinyin_table.py > data/pinyin.tsv
"""

import sys

from pypinyin import Style, pinyin

RANGES = [(0x3400, 0x4DBF), (0x4E00, 0x9FFF)]


def main():
    out = sys.stdout
    out.write("# char<TAB>tone-numbered pinyin, one most-frequent reading per char\n")
    out.write("# generated by tools/gen_pinyin_table.py from pypinyin (MIT)\n")
    for lo, hi in RANGES:
        for cp in range(lo, hi + 1):
            ch = chr(cp)
            reading = pinyin(ch, style=Style.TONE3, heteronym=False,
                             neutral_tone_with_five=True, errors="ignore")
            if not reading or not reading[0]:
                continue
            syl = reading[0][0].lower()
            if not syl or not syl.isascii() or not syl.isalnum():
                continue
            out.write(f"{ch}\t{syl}\n")


if __name__ == "__main__":
    main()
