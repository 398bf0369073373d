"""Hand-drawn 8x6 letter bitmaps ('#' = ink) used as the clean training sample."""

GLYPHS = {
    "A": ["..##..", ".#..#.", "#....#", "#....#", "######", "#....#", "#....#", "#....#"],
    "B": ["#####.", "#....#", "#....#", "#####.", "#....#", "#....#", "#....#", "#####."],
    "C": [".####.", "#....#", "#.....", "#.....", "#.....", "#.....", "#....#", ".####."],
    "D": ["####..", "#...#.", "#....#", "#....#", "#....#", "#....#", "#...#.", "####.."],
    "E": ["######", "#.....", "#.....", "#####.", "#.....", "#.....", "#.....", "######"],
    "F": ["######", "#.....", "#.....", "#####.", "#.....", "#.....", "#.....", "#....."],
    "G": [".####.", "#....#", "#.....", "#.....", "#..###", "#....#", "#....#", ".####."],
    "H": ["#....#", "#....#", "#....#", "######", "#....#", "#....#", "#....#", "#....#"],
    "I": [".####.", "..##..", "..##..", "..##..", "..##..", "..##..", "..##..", ".####."],
    "J": ["..####", "....#.", "....#.", "....#.", "....#.", "#...#.", "#...#.", ".###.."],
    "K": ["#...#.", "#..#..", "#.#...", "##....", "##....", "#.#...", "#..#..", "#...#."],
    "L": ["#.....", "#.....", "#.....", "#.....", "#.....", "#.....", "#.....", "######"],
    "M": ["#....#", "##..##", "#.##.#", "#.##.#", "#....#", "#....#", "#....#", "#....#"],
    "N": ["#....#", "##...#", "##...#", "#.#..#", "#..#.#", "#...##", "#...##", "#....#"],
    "O": [".####.", "#....#", "#....#", "#....#", "#....#", "#....#", "#....#", ".####."],
    "P": ["#####.", "#....#", "#....#", "#####.", "#.....", "#.....", "#.....", "#....."],
    "Q": [".####.", "#....#", "#....#", "#....#", "#....#", "#..#.#", "#...#.", ".###.#"],
    "R": ["#####.", "#....#", "#....#", "#####.", "#.#...", "#..#..", "#...#.", "#....#"],
    "S": [".####.", "#....#", "#.....", ".####.", ".....#", ".....#", "#....#", ".####."],
    "T": ["######", "..##..", "..##..", "..##..", "..##..", "..##..", "..##..", "..##.."],
    "U": ["#....#", "#....#", "#....#", "#....#", "#....#", "#....#", "#....#", ".####."],
    "V": ["#....#", "#....#", "#....#", "#....#", ".#..#.", ".#..#.", "..##..", "..##.."],
    "W": ["#....#", "#....#", "#....#", "#....#", "#.##.#", "#.##.#", "##..##", "#....#"],
    "X": ["#....#", ".#..#.", ".#..#.", "..##..", "..##..", ".#..#.", ".#..#.", "#....#"],
    "Y": ["#....#", ".#..#.", ".#..#.", "..##..", "..##..", "..##..", "..##..", "..##.."],
    "Z": ["######", ".....#", "....#.", "...#..", "..#...", ".#....", "#.....", "######"],
}
