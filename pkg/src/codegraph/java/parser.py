"""Error-tolerant structural parser for Java type declarations.

Only the declaration skeleton is parsed: type headers, member fields and
constructor parameters. Method bodies, initializers and expressions are
skimmed token by token, looking only for local type declarations.

Every type reference is reduced to its base identifier: generic arguments
and array dimensions are dropped, and a qualified name ``a.b.C`` reduces to
``C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from codegraph.kernels import IDENT, OP, lex_java

MODIFIERS = frozenset(
    {
        "public",
        "protected",
        "private",
        "static",
        "abstract",
        "final",
        "native",
        "synchronized",
        "transient",
        "volatile",
        "strictfp",
        "default",
        "sealed",
    }
)

PRIMITIVES = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var"}
)

KINDS = ("class", "interface", "enum", "record", "annotation")


@dataclass
class TypeDeclaration:
    """One type declaration with the raw references found in its own body."""

    name: str
    kind: str
    offset: int
    extends: list[str] = field(default_factory=list)
    implements: list[str] = field(default_factory=list)
    field_types: list[str] = field(default_factory=list)
    constructor_param_types: list[str] = field(default_factory=list)


class _Parser:
    def __init__(self, tokens: list[tuple[int, str, int]]) -> None:
        self.kinds = [t[0] for t in tokens]
        self.texts = [t[1] for t in tokens]
        self.offsets = [t[2] for t in tokens]
        self.n = len(tokens)
        self.i = 0
        self.decls: list[TypeDeclaration] = []

    # -- token helpers -------------------------------------------------

    def text(self, k: int = 0) -> str | None:
        j = self.i + k
        return self.texts[j] if j < self.n else None

    def is_ident(self, k: int = 0) -> bool:
        j = self.i + k
        return j < self.n and self.kinds[j] == IDENT

    def is_op(self, value: str, k: int = 0) -> bool:
        j = self.i + k
        return j < self.n and self.kinds[j] == OP and self.texts[j] == value

    # -- compilation unit ----------------------------------------------

    def parse(self) -> list[TypeDeclaration]:
        while self.i < self.n:
            start = self.i
            t = self.text()
            if t in ("package", "import") and self.is_ident():
                self.skip_past(";")
                continue
            if self.is_op(";"):
                self.i += 1
                continue
            self.skip_modifiers()
            kind = self.type_keyword()
            if kind is not None:
                self.parse_type_declaration(kind)
            elif self.is_op("{"):
                # module declaration bodies and stray blocks
                self.skim_block()
            elif self.i == start:
                self.i += 1
        return self.decls

    def skip_past(self, stop: str) -> None:
        while self.i < self.n and not self.is_op(stop):
            self.i += 1
        self.i += 1

    # -- modifiers and annotations -------------------------------------

    def skip_modifiers(self) -> None:
        while self.i < self.n:
            if self.is_ident() and self.text() in MODIFIERS:
                self.i += 1
            elif self.text() == "non" and self.is_op("-", 1) and self.text(2) == "sealed":
                self.i += 3
            elif self.is_op("@") and self.text(1) != "interface":
                self.skip_annotation()
            else:
                return

    def skip_annotation(self) -> None:
        self.i += 1  # '@'
        if self.is_ident():
            self.i += 1
            while self.is_op(".") and self.is_ident(1):
                self.i += 2
        if self.is_op("("):
            self.skip_balanced("(", ")")

    def skip_balanced(self, open_: str, close: str) -> None:
        """Skip a bracketed group starting at the current opening token."""
        depth = 0
        while self.i < self.n:
            if self.kinds[self.i] == OP:
                t = self.texts[self.i]
                if t == open_:
                    depth += 1
                elif t == close:
                    depth -= 1
                    if depth == 0:
                        self.i += 1
                        return
            self.i += 1

    def skip_type_arguments(self) -> None:
        depth = 0
        while self.i < self.n:
            if self.kinds[self.i] == OP:
                t = self.texts[self.i]
                if t == "<":
                    depth += 1
                elif t == ">":
                    depth -= 1
                    if depth == 0:
                        self.i += 1
                        return
                elif t in (";", "{", "}", "=") or (t == ")" and depth == 0):
                    return
                elif t == "(":
                    self.skip_balanced("(", ")")
                    continue
            self.i += 1

    # -- declarations ----------------------------------------------------

    def type_keyword(self) -> str | None:
        if not self.is_ident():
            return "annotation" if self.is_op("@") and self.text(1) == "interface" else None
        t = self.text()
        if t in ("class", "interface", "enum") and self.is_ident(1):
            return t
        if t == "record" and self.is_ident(1) and (self.is_op("(", 2) or self.is_op("<", 2)):
            return "record"
        return None

    def parse_type_declaration(self, kind: str) -> None:
        self.i += 2 if kind == "annotation" else 1
        if not self.is_ident():
            return
        decl = TypeDeclaration(self.texts[self.i], kind, self.offsets[self.i])
        self.decls.append(decl)
        self.i += 1
        while self.i < self.n:
            if self.is_op("{"):
                self.parse_body(decl)
                return
            if self.is_op(";") or self.is_op("}"):
                return
            if self.is_op("<"):
                self.skip_type_arguments()
            elif self.is_op("("):
                # record header: components are not fields
                self.skip_balanced("(", ")")
            elif self.text() == "extends" and self.is_ident():
                self.i += 1
                decl.extends.extend(self.parse_type_list())
            elif self.text() == "implements" and self.is_ident():
                self.i += 1
                decl.implements.extend(self.parse_type_list())
            elif self.text() == "permits" and self.is_ident():
                self.i += 1
                self.parse_type_list()
            else:
                self.i += 1

    def parse_type_list(self) -> list[str]:
        names = []
        while True:
            start = self.i
            base = self.parse_type()
            if base is not None:
                names.append(base)
            if self.i == start or not self.is_op(","):
                return names
            self.i += 1

    def parse_type(self) -> str | None:
        """Consume a type and return its base identifier (``None`` for primitives)."""
        self.skip_type_annotations()
        if not self.is_ident():
            return None
        base: str | None = self.texts[self.i]
        if base in PRIMITIVES:
            base = None
        self.i += 1
        while self.i < self.n:
            if self.is_op("<"):
                self.skip_type_arguments()
            elif self.is_op(".") and (self.is_ident(1) or self.is_op("@", 1)):
                self.i += 1
                self.skip_type_annotations()
                if not self.is_ident():
                    break
                base = self.texts[self.i]
                self.i += 1
            else:
                break
        self.skip_dimensions()
        return base

    def skip_type_annotations(self) -> None:
        while self.is_op("@") and self.text(1) != "interface":
            self.skip_annotation()

    def skip_dimensions(self) -> None:
        while True:
            self.skip_type_annotations()
            if self.is_op("[") and self.is_op("]", 1):
                self.i += 2
            else:
                return

    # -- bodies ------------------------------------------------------------

    def parse_body(self, decl: TypeDeclaration) -> None:
        self.i += 1  # '{'
        if decl.kind == "enum":
            if not self.parse_enum_constants():
                return
        while self.i < self.n:
            if self.is_op("}"):
                self.i += 1
                return
            start = self.i
            self.parse_member(decl)
            if self.i == start:
                self.i += 1

    def parse_enum_constants(self) -> bool:
        """Skip the constant list; return False if the body closed with it."""
        while self.i < self.n:
            self.skip_type_annotations()
            if self.is_op(";"):
                self.i += 1
                return True
            if self.is_op("}"):
                self.i += 1
                return False
            if not self.is_ident():
                return True
            self.i += 1
            if self.is_op("("):
                self.skip_balanced("(", ")")
            if self.is_op("{"):
                self.skim_block()
            if self.is_op(","):
                self.i += 1
        return False

    def parse_member(self, decl: TypeDeclaration) -> None:
        if self.is_op(";"):
            self.i += 1
            return
        self.skip_modifiers()
        kind = self.type_keyword()
        if kind is not None:
            self.parse_type_declaration(kind)
            return
        if self.is_op("{"):
            self.skim_block()
            return
        if self.is_op("<"):
            self.skip_type_arguments()
        if self.is_ident() and self.is_op("(", 1):
            self.i += 1
            decl.constructor_param_types.extend(self.parse_formal_parameters())
            self.skip_to_body()
            return
        if decl.kind == "record" and self.is_ident() and self.is_op("{", 1):
            self.i += 1
            self.skim_block()
            return
        if not self.is_ident() and not self.is_op("@"):
            return
        base = self.parse_type()
        if not self.is_ident():
            self.skip_statement()
            return
        self.i += 1
        if self.is_op("("):
            self.skip_balanced("(", ")")
            self.skip_to_body()
            return
        if base is not None:
            decl.field_types.append(base)
        self.skip_statement()

    def parse_formal_parameters(self) -> list[str]:
        types = []
        self.i += 1  # '('
        while self.i < self.n and not self.is_op(")"):
            start = self.i
            self.skip_modifiers()
            base = self.parse_type()
            if base is not None and (self.is_ident() or self.is_op("...")):
                types.append(base)
            # skip name, receiver parameter, varargs marker, trailing dims
            while self.i < self.n and not (self.is_op(",") or self.is_op(")")):
                if self.is_op("(") or self.is_op("{") or self.is_op("}") or self.is_op(";"):
                    return types
                self.i += 1
            if self.is_op(","):
                self.i += 1
            if self.i == start:
                self.i += 1
        self.i += 1  # ')'
        return types

    def skip_to_body(self) -> None:
        """After a method/constructor header: skip throws/default and the body."""
        while self.i < self.n:
            if self.is_op("{"):
                self.skim_block()
                return
            if self.is_op(";"):
                self.i += 1
                return
            if self.is_op("}"):
                return
            if self.text() == "default" and self.is_ident():
                self.i += 1
                self.skip_statement()
                return
            self.i += 1

    def skip_statement(self) -> None:
        """Skip to the ``;`` ending the current member, skimming nested blocks."""
        depth = 0
        while self.i < self.n:
            if self.kinds[self.i] == OP:
                t = self.texts[self.i]
                if t == "{":
                    self.skim_block()
                    continue
                if t in ("(", "["):
                    depth += 1
                elif t in (")", "]"):
                    depth -= 1
                elif t == ";" and depth <= 0:
                    self.i += 1
                    return
                elif t == "}":
                    return
            self.i += 1

    def skim_block(self) -> None:
        """Skip a brace block, parsing any local type declarations inside it."""
        depth = 0
        while self.i < self.n:
            if self.kinds[self.i] == OP:
                t = self.texts[self.i]
                if t == "{":
                    depth += 1
                elif t == "}":
                    depth -= 1
                    if depth == 0:
                        self.i += 1
                        return
                elif t == "@" and self.text(1) == "interface":
                    self.parse_type_declaration("annotation")
                    continue
            elif self.i == 0 or self.texts[self.i - 1] != ".":
                kind = self.type_keyword()
                if kind is not None and kind != "annotation":
                    self.parse_type_declaration(kind)
                    continue
            self.i += 1


def parse_declarations(source: str) -> list[TypeDeclaration]:
    """Return every type declaration in *source*, nested ones included, in source order."""
    return _Parser(lex_java(source)).parse()
