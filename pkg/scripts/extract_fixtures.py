# Development-only helper: parse the source document tables into fixture
# matrix files.  Not part of the package; run once from the repo root.
import re
import sys
from pathlib import Path

TEXT = Path("paper.md").read_text()


def parse_tabular(block: str) -> list[list[int]]:
    # rows separated by \\, entries by &; whitespace/newlines are noise
    body = block.strip()
    rows = []
    for raw in re.split(r"\\\\", body):
        raw = raw.strip()
        if not raw:
            continue
        entries = [e.strip() for e in raw.split("&")]
        entries = [e for e in entries if e != ""]
        rows.append([int(e) for e in entries])
    return rows


def find_tabulars() -> list[list[list[int]]]:
    pat = re.compile(
        r"\\begin\{tabular\}\s*\{[c|]+\}(.*?)\\end\{tabular\}", re.DOTALL
    )
    out = []
    for m in pat.finditer(TEXT):
        body = m.group(1)
        if "$" in body:  # table 1/2/3 carry math labels; skip those
            continue
        try:
            out.append(parse_tabular(body))
        except ValueError:
            continue
    return out


def write_matrix(path: Path, mat: list[list[int]]) -> None:
    lines = [f"{len(mat)} {len(mat[0])}"]
    for row in mat:
        lines.append(" ".join(str(x) for x in row))
    path.write_text("\n".join(lines) + "\n")


def main():
    mats = find_tabulars()
    shapes = [(len(m), len(m[0]) if m else 0) for m in mats]
    print("found numeric tabulars with shapes:", shapes)
    by_shape = {}
    for m in mats:
        by_shape.setdefault((len(m), len(m[0])), []).append(m)
    dest = Path("src/lat40/fixtures")
    b1 = by_shape[(20, 20)][0]
    b3 = by_shape[(10, 10)][0]
    g40 = by_shape[(40, 40)]
    print("count of 40x40:", len(g40))
    gram, g1, g2 = g40
    write_matrix(dest / "b1.txt", b1)
    write_matrix(dest / "b3.txt", b3)
    write_matrix(dest / "gram_o40.txt", gram)
    write_matrix(dest / "aut_g1.txt", g1)
    write_matrix(dest / "aut_g2.txt", g2)
    # quick sanity: gram must be symmetric with diagonal 4
    for i in range(40):
        assert gram[i][i] == 4, (i, gram[i][i])
        for j in range(40):
            assert gram[i][j] == gram[j][i], (i, j)
    print("gram symmetric with diagonal 4: OK")
    # row check for b1/b3 per the running text
    assert all(len(r) == 20 for r in b1) and len(b1) == 20
    assert all(len(r) == 10 for r in b3) and len(b3) == 10
    print("wrote fixtures")


if __name__ == "__main__":
    sys.exit(main())
