"""Tokenizers for C source and x86-64 GAS assembly.

Both lexers emit flat token streams suitable for sequence modeling:
comments and whitespace are dropped, and in assembly each instruction
line is terminated by a ``<newline>`` sentinel token (line breaks are
meaningful in GAS but not in C).
"""

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import UnterminatedLiteral

NEWLINE_SENTINEL = "<newline>"


class TokenKind(Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    NUMBER = "number"
    STRING_LIT = "string"
    CHAR_LIT = "char"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"
    DIRECTIVE = "directive"
    REGISTER = "register"
    LABEL_DEF = "label_def"
    NEWLINE = "newline"
    COMMENT = "comment"


class Language(Enum):
    C = "c"
    GAS = "gas"


@dataclass(frozen=True)
class Token:
    text: str
    kind: TokenKind

    def __post_init__(self):
        assert self.text, "tokens carry non-empty text"
        assert "\n" not in self.text, "token text never spans lines"


@dataclass
class TokenStream:
    tokens: list = field(default_factory=list)
    language: Language = Language.C

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return TokenStream(tokens=self.tokens[index], language=self.language)
        return self.tokens[index]

    def texts(self):
        return [t.text for t in self.tokens]


C_KEYWORDS = frozenset(
    """
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Bool _Complex _Imaginary
    """.split()
)

# Longest-match-first operator table (3-char before 2-char before 1-char).
C_OPERATORS = [
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=", "##",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~", "?", "#",
]

C_PUNCTUATION = frozenset("()[]{};,:.")

_C_IDENT_START = re.compile(r"[A-Za-z_]")
_C_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_C_NUMBER = re.compile(
    r"""
    (?: 0[xX][0-9a-fA-F]+(?:[uUlL]*)                        # hex
      | (?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?[fFlLuU]*    # dec / float
    )
    """,
    re.VERBOSE,
)


def _scan_c_string(source, i, quote):
    """Scan a quoted literal starting at source[i] == quote; returns end index."""
    j = i + 1
    n = len(source)
    while j < n:
        c = source[j]
        if c == "\\":
            j += 2
            continue
        if c == quote:
            return j + 1
        if c == "\n":
            break
        j += 1
    raise UnterminatedLiteral(f"unterminated {quote}...{quote} literal at offset {i}")


def lex_c(source: str) -> TokenStream:
    """Tokenize C source, dropping comments and all whitespace.

    Raises UnterminatedLiteral on unclosed string/char literals or block
    comments, which corpus construction uses to skip malformed units.
    """
    tokens = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if source.startswith("//", i):
            end = source.find("\n", i)
            i = n if end < 0 else end + 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise UnterminatedLiteral(f"unterminated block comment at offset {i}")
            i = end + 2
            continue
        if c == '"' or c == "'":
            end = _scan_c_string(source, i, c)
            kind = TokenKind.STRING_LIT if c == '"' else TokenKind.CHAR_LIT
            tokens.append(Token(source[i:end], kind))
            i = end
            continue
        m = _C_NUMBER.match(source, i)
        if m and (c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit())):
            tokens.append(Token(m.group(), TokenKind.NUMBER))
            i = m.end()
            continue
        if _C_IDENT_START.match(c):
            m = _C_IDENT.match(source, i)
            text = m.group()
            kind = TokenKind.KEYWORD if text in C_KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(text, kind))
            i = m.end()
            continue
        for op in C_OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(op, TokenKind.OPERATOR))
                i += len(op)
                break
        else:
            if c in C_PUNCTUATION:
                tokens.append(Token(c, TokenKind.PUNCTUATION))
            else:
                # Lone unknown byte (e.g. `@` inside macros): keep as punctuation
                # so lexing never requires a full parse.
                tokens.append(Token(c, TokenKind.PUNCTUATION))
            i += 1
    return TokenStream(tokens, Language.C)


# GAS token shapes. Immediates keep their `$` prefix (and sign), registers
# their `%` prefix; memory-operand displacements like `-8(%rbp)` are NOT
# fused with the parenthesis.
_GAS_LABEL = re.compile(r"[A-Za-z_.$][A-Za-z0-9_.$]*:")
_GAS_DIRECTIVE = re.compile(r"\.[A-Za-z0-9_.]+")
_GAS_REGISTER = re.compile(r"%[A-Za-z0-9]+")
_GAS_IMMEDIATE = re.compile(r"\$-?[A-Za-z0-9_.$]+")
_GAS_NUMBER = re.compile(r"-?(?:0[xX][0-9a-fA-F]+|\d+)")
_GAS_IDENT = re.compile(r"[A-Za-z_.][A-Za-z0-9_.$]*")


def _lex_gas_line(line, tokens):
    i = 0
    n = len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            break  # line comment
        if c == '"':
            end = _scan_c_string(line, i, '"')
            tokens.append(Token(line[i:end], TokenKind.STRING_LIT))
            i = end
            continue
        for regex, kind in (
            (_GAS_LABEL, TokenKind.LABEL_DEF),
            (_GAS_REGISTER, TokenKind.REGISTER),
            (_GAS_IMMEDIATE, TokenKind.NUMBER),
            (_GAS_NUMBER, TokenKind.NUMBER),
            (_GAS_DIRECTIVE, TokenKind.DIRECTIVE),
            (_GAS_IDENT, TokenKind.IDENTIFIER),
        ):
            m = regex.match(line, i)
            if m:
                tokens.append(Token(m.group(), kind))
                i = m.end()
                break
        else:
            tokens.append(Token(c, TokenKind.PUNCTUATION))
            i += 1


def lex_gas(source: str) -> TokenStream:
    """Tokenize GAS-syntax assembly; each nonempty line ends in <newline>.

    Comment-only and blank lines produce no tokens at all.
    """
    tokens = []
    for line in source.split("\n"):
        before = len(tokens)
        _lex_gas_line(line, tokens)
        if len(tokens) > before:
            tokens.append(Token(NEWLINE_SENTINEL, TokenKind.NEWLINE))
    return TokenStream(tokens, Language.GAS)


def detokenize(stream: TokenStream) -> str:
    """Reconstruct assemblable text from a GAS token stream.

    Newline sentinels become line breaks; all other tokens are joined with
    single spaces. The output is accepted by the assembler whenever the
    token sequence itself is syntactically valid.
    """
    lines = []
    current = []
    for tok in stream:
        if tok.kind is TokenKind.NEWLINE:
            lines.append(" ".join(current))
            current = []
        else:
            current.append(tok.text)
    if current:
        lines.append(" ".join(current))
    return "\n".join(lines) + ("\n" if lines else "")


def detokenize_line(texts) -> str:
    """Like detokenize, but over raw token texts (e.g. a corpus line)."""
    stream = TokenStream(
        [
            Token(t, TokenKind.NEWLINE if t == NEWLINE_SENTINEL else TokenKind.IDENTIFIER)
            for t in texts
        ],
        Language.GAS,
    )
    return detokenize(stream)
