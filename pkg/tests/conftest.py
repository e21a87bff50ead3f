import pytest

from spast import parse_instance

# Three-student instance with a two-project tie for s1; l1 offers two projects.
I1_TEXT = """\
3 3 2
s1 : (p1 p2)
s2 : p2 p3
s3 : p3 p1
p1 : 1 : l1
p2 : 1 : l1
p3 : 1 : l2
l1 : 2 : s3 (s1 s2)
l2 : 1 : (s3 s2)
"""

# Two students, one lecturer; the only strongly stable matching is {(s1, p1)}.
I2_TEXT = """\
2 2 1
s1 : (p1 p2)
s2 : p1
p1 : 1 : l1
p2 : 1 : l1
l1 : 2 : s1 s2
"""

# Eight students, three lecturers; admits a unique student-optimal outcome.
I3_TEXT = """\
8 6 3
s1 : p1 p6
s2 : p1 p2
s3 : (p1 p4)
s4 : p2 (p5 p6)
s5 : (p2 p3)
s6 : (p2 p4)
s7 : p3 p1
s8 : p5 p1
p1 : 2 : l1
p2 : 2 : l1
p3 : 1 : l2
p4 : 1 : l2
p5 : 1 : l3
p6 : 2 : l3
l1 : 3 : s8 s7 (s1 s2 s3) (s4 s5) s6
l2 : 2 : s6 s5 (s7 s3)
l3 : 3 : (s1 s4) s8
"""

# Two students with identical strict lists; both lecturer lists are a single
# tie, so every matching is undermined and no strongly stable one exists.
UNSOLVABLE_TEXT = """\
2 2 2
s1 : p1 p2
s2 : p1 p2
p1 : 1 : l1
p2 : 1 : l2
l1 : 1 : (s1 s2)
l2 : 1 : (s1 s2)
"""


@pytest.fixture(scope="session")
def i1():
    return parse_instance(I1_TEXT)


@pytest.fixture(scope="session")
def i2():
    return parse_instance(I2_TEXT)


@pytest.fixture(scope="session")
def i3():
    return parse_instance(I3_TEXT)


@pytest.fixture(scope="session")
def unsolvable():
    return parse_instance(UNSOLVABLE_TEXT)


def names(inst, assignment):
    """Render an assignment dict as sorted (student, project) name pairs."""
    return sorted((inst.students[s], inst.projects[p]) for s, p in assignment.items())
