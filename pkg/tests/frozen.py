"""Reference values produced by tests/oracle.py (90 decimal digits) and frozen.

test_frozen.py recomputes them from the oracle so a drift in either the
oracle or these constants is caught.
"""

# |f_n(1/2) - e^{i}|, a = 2, nodes 1 - 2j/n
NEW_ERR = {
    4: "5.7585105196351196427653661133158439265460e-3",
    8: "1.6254985731227567743362552948220489429741e-6",
    16: "1.1683032897153699186412084760776976358338e-15",
    24: "1.8726526477204725956646320272737905159871e-26",
    32: "2.3338017087460075265241916467348100524865e-38",
}
CLASSIC_ERR = {
    4: "9.6746167117018024824967771661236151216486e-2",
    8: "4.7807154655996866534012716634322781147548e-2",
    16: "2.3691984677931098398442346413719365669463e-2",
    24: "1.5741160330380746572719192026746635749315e-2",
    32: "1.1784935817641474060607820870741874243648e-2",
}

# Im(f'/f) at x = 1/20 for a = 2, nodes 1 - 2j/16
LOCAL_FREQ_N16 = "1.9999999999999999999999999999960330254025"
