//! Hand-built parse fixtures with hand-derived expected action schemas.
//! Every fixture's dependency tree was checked by hand against the trigger
//! path rule, the subject/object/modifier rules and the marker exceptions.

use jdd_core::config::EngineConfig;
use jdd_core::extract::{extract_record, ParseSet, SentenceParse};
use jdd_core::model::{CaseType, ClassifiedSentence, JddRecord};
use jdd_core::parse::{ConstituencyTree, DepEdge, DependencyGraph, Token, TreeNode};

pub fn edge(head: usize, dep: usize, rel: &str) -> DepEdge {
    DepEdge {
        head,
        dep,
        rel: rel.to_string(),
    }
}

fn t(form: &str, upos: &str, xpos: &str) -> Token {
    Token::new(form, form, upos, xpos)
}

fn pt(tag: &str, form: &str) -> TreeNode {
    TreeNode::pre_terminal(tag, form)
}

fn node(label: &str, children: Vec<TreeNode>) -> TreeNode {
    TreeNode::internal(label, children)
}

/// 被告人在15号车厢当面接收张某某发送的手机微信红包
pub fn red_pocket() -> (ConstituencyTree, DependencyGraph) {
    let tokens = vec![
        t("被告人", "NOUN", "NN"),   // 0
        t("在", "ADP", "P"),          // 1
        t("15号", "NOUN", "NT"),      // 2
        t("车厢", "NOUN", "NN"),      // 3
        t("当面", "ADV", "AD"),       // 4
        t("接收", "VERB", "VV"),      // 5
        t("张某某", "PROPN", "NR"),   // 6
        t("发送", "VERB", "VV"),      // 7
        t("的", "PART", "DEC"),       // 8
        t("手机", "NOUN", "NN"),      // 9
        t("微信", "NOUN", "NN"),      // 10
        t("红包", "NOUN", "NN"),      // 11
    ];
    let edges = vec![
        edge(5, 0, "nsubj"),
        edge(3, 1, "case"),
        edge(3, 2, "nmod"),
        edge(5, 3, "obl"),
        edge(5, 4, "advmod"),
        edge(7, 6, "nsubj"),
        edge(11, 7, "acl"),
        edge(7, 8, "mark"),
        edge(11, 9, "compound"),
        edge(11, 10, "compound"),
        edge(5, 11, "obj"),
    ];
    let graph = DependencyGraph::new(tokens, edges, 5);
    graph.validate().expect("red pocket graph");
    let tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NN", "被告人")]),
            node(
                "VP",
                vec![
                    node(
                        "PP",
                        vec![
                            pt("P", "在"),
                            node("NP", vec![pt("NT", "15号"), pt("NN", "车厢")]),
                        ],
                    ),
                    node("ADVP", vec![pt("AD", "当面")]),
                    node(
                        "VP",
                        vec![
                            pt("VV", "接收"),
                            node(
                                "NP",
                                vec![
                                    node(
                                        "CP",
                                        vec![
                                            node(
                                                "IP",
                                                vec![
                                                    node("NP", vec![pt("NR", "张某某")]),
                                                    node("VP", vec![pt("VV", "发送")]),
                                                ],
                                            ),
                                            pt("DEC", "的"),
                                        ],
                                    ),
                                    node(
                                        "NP",
                                        vec![
                                            pt("NN", "手机"),
                                            pt("NN", "微信"),
                                            pt("NN", "红包"),
                                        ],
                                    ),
                                ],
                            ),
                        ],
                    ),
                ],
            ),
        ],
    ));
    tree.validate().expect("red pocket tree");
    (tree, graph)
}

/// The seven-clause flowing sentence about drug smuggling.
fn smuggling() -> (ConstituencyTree, DependencyGraph) {
    let tokens = vec![
        t("2017年11月1日8时30分", "NOUN", "NT"),              // 0
        t("，", "PUNCT", "PU"),                                // 1
        t("被告人", "NOUN", "NN"),                             // 2
        t("李xx", "PROPN", "NR"),                              // 3
        t("体内", "NOUN", "NN"),                               // 4
        t("藏匿", "VERB", "VV"),                               // 5
        t("毒品", "NOUN", "NN"),                               // 6
        t("，", "PUNCT", "PU"),                                // 7
        t("从", "ADP", "P"),                                   // 8
        t("缅甸小勐拉", "PROPN", "NR"),                        // 9
        t("走私", "VERB", "VV"),                               // 10
        t("入境", "VERB", "VV"),                               // 11
        t("至", "ADP", "P"),                                   // 12
        t("中国打洛223号界桩", "PROPN", "NR"),                 // 13
        t("，", "PUNCT", "PU"),                                // 14
        t("被", "AUX", "BB"),                                  // 15
        t("勐海县公安边防大队打洛封控队", "PROPN", "NR"),      // 16
        t("查获", "VERB", "VV"),                               // 17
        t("，", "PUNCT", "PU"),                                // 18
        t("执勤人员", "NOUN", "NN"),                           // 19
        t("对", "ADP", "P"),                                   // 20
        t("其", "PRON", "PN"),                                 // 21
        t("盘问", "VERB", "VV"),                               // 22
        t("时", "PART", "LC"),                                 // 23
        t("李xx", "PROPN", "NR"),                              // 24
        t("如实", "ADV", "AD"),                                // 25
        t("供述", "VERB", "VV"),                               // 26
        t("体内", "NOUN", "NN"),                               // 27
        t("藏匿", "VERB", "VV"),                               // 28
        t("毒品", "NOUN", "NN"),                               // 29
        t("，", "PUNCT", "PU"),                                // 30
        t("后", "ADV", "AD"),                                  // 31
        t("执勤人员", "NOUN", "NN"),                           // 32
        t("收缴", "VERB", "VV"),                               // 33
        t("李xx", "PROPN", "NR"),                              // 34
        t("从", "ADP", "P"),                                   // 35
        t("体内", "NOUN", "NN"),                               // 36
        t("排出", "VERB", "VV"),                               // 37
        t("的", "PART", "DEC"),                                // 38
        t("毒品可疑物", "NOUN", "NN"),                         // 39
        t("59坨", "NOUN", "NT"),                               // 40
        t("，", "PUNCT", "PU"),                                // 41
        t("净重", "NOUN", "NN"),                               // 42
        t("354克", "NOUN", "NT"),                              // 43
        t("。", "PUNCT", "PU"),                                // 44
    ];
    let edges = vec![
        edge(5, 0, "obl:tmod"),
        edge(0, 1, "punct"),
        edge(3, 2, "appos"),
        edge(5, 3, "nsubj"),
        edge(5, 4, "obl"),
        edge(5, 6, "obj"),
        edge(5, 7, "punct"),
        edge(9, 8, "case"),
        edge(10, 9, "obl"),
        edge(5, 10, "conj"),
        edge(10, 11, "conj"),
        edge(13, 12, "case"),
        edge(11, 13, "obl"),
        edge(10, 14, "punct"),
        edge(17, 15, "aux:pass"),
        edge(17, 16, "obl:agent"),
        edge(5, 17, "conj"),
        edge(17, 18, "punct"),
        edge(22, 19, "nsubj"),
        edge(21, 20, "case"),
        edge(22, 21, "obl"),
        edge(26, 22, "advcl"),
        edge(22, 23, "mark"),
        edge(26, 24, "nsubj"),
        edge(26, 25, "advmod"),
        edge(5, 26, "conj"),
        edge(28, 27, "obl"),
        edge(26, 28, "ccomp"),
        edge(28, 29, "obj"),
        edge(26, 30, "punct"),
        edge(33, 31, "advmod"),
        edge(33, 32, "nsubj"),
        edge(5, 33, "conj"),
        edge(37, 34, "nsubj"),
        edge(36, 35, "case"),
        edge(37, 36, "obl"),
        edge(39, 37, "acl"),
        edge(37, 38, "mark"),
        edge(33, 39, "obj"),
        edge(39, 40, "nmod"),
        edge(33, 41, "punct"),
        edge(5, 42, "conj"),
        edge(42, 43, "nmod"),
        edge(42, 44, "punct"),
    ];
    let graph = DependencyGraph::new(tokens, edges, 5);
    graph.validate().expect("smuggling graph");
    let tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NT", "2017年11月1日8时30分")]),
            pt("PU", "，"),
            node(
                "IP",
                vec![
                    node("NP", vec![pt("NN", "被告人"), pt("NR", "李xx")]),
                    node(
                        "VP",
                        vec![
                            node("NP", vec![pt("NN", "体内")]),
                            node("VP", vec![pt("VV", "藏匿"), node("NP", vec![pt("NN", "毒品")])]),
                        ],
                    ),
                ],
            ),
            pt("PU", "，"),
            node(
                "IP",
                vec![node(
                    "VP",
                    vec![
                        node(
                            "PP",
                            vec![pt("P", "从"), node("NP", vec![pt("NR", "缅甸小勐拉")])],
                        ),
                        node(
                            "VP",
                            vec![
                                pt("VV", "走私"),
                                node(
                                    "VP",
                                    vec![
                                        pt("VV", "入境"),
                                        node(
                                            "PP",
                                            vec![
                                                pt("P", "至"),
                                                node(
                                                    "NP",
                                                    vec![pt("NR", "中国打洛223号界桩")],
                                                ),
                                            ],
                                        ),
                                    ],
                                ),
                            ],
                        ),
                    ],
                )],
            ),
            pt("PU", "，"),
            node(
                "IP",
                vec![node(
                    "VP",
                    vec![
                        pt("SB", "被"),
                        node("NP", vec![pt("NR", "勐海县公安边防大队打洛封控队")]),
                        node("VP", vec![pt("VV", "查获")]),
                    ],
                )],
            ),
            pt("PU", "，"),
            node(
                "IP",
                vec![
                    node(
                        "LCP",
                        vec![
                            node(
                                "IP",
                                vec![
                                    node("NP", vec![pt("NN", "执勤人员")]),
                                    node(
                                        "VP",
                                        vec![
                                            node(
                                                "PP",
                                                vec![pt("P", "对"), node("NP", vec![pt("PN", "其")])],
                                            ),
                                            node("VP", vec![pt("VV", "盘问")]),
                                        ],
                                    ),
                                ],
                            ),
                            pt("LC", "时"),
                        ],
                    ),
                    node("NP", vec![pt("NR", "李xx")]),
                    node(
                        "VP",
                        vec![
                            node("ADVP", vec![pt("AD", "如实")]),
                            node(
                                "VP",
                                vec![
                                    pt("VV", "供述"),
                                    node(
                                        "IP",
                                        vec![node(
                                            "VP",
                                            vec![
                                                node("NP", vec![pt("NN", "体内")]),
                                                node(
                                                    "VP",
                                                    vec![
                                                        pt("VV", "藏匿"),
                                                        node("NP", vec![pt("NN", "毒品")]),
                                                    ],
                                                ),
                                            ],
                                        )],
                                    ),
                                ],
                            ),
                        ],
                    ),
                ],
            ),
            pt("PU", "，"),
            node(
                "IP",
                vec![
                    node("ADVP", vec![pt("AD", "后")]),
                    node("NP", vec![pt("NN", "执勤人员")]),
                    node(
                        "VP",
                        vec![
                            pt("VV", "收缴"),
                            node(
                                "NP",
                                vec![
                                    node(
                                        "CP",
                                        vec![
                                            node(
                                                "IP",
                                                vec![
                                                    node("NP", vec![pt("NR", "李xx")]),
                                                    node(
                                                        "VP",
                                                        vec![
                                                            node(
                                                                "PP",
                                                                vec![
                                                                    pt("P", "从"),
                                                                    node(
                                                                        "NP",
                                                                        vec![pt("NN", "体内")],
                                                                    ),
                                                                ],
                                                            ),
                                                            node("VP", vec![pt("VV", "排出")]),
                                                        ],
                                                    ),
                                                ],
                                            ),
                                            pt("DEC", "的"),
                                        ],
                                    ),
                                    node(
                                        "NP",
                                        vec![pt("NN", "毒品可疑物"), pt("NT", "59坨")],
                                    ),
                                ],
                            ),
                        ],
                    ),
                ],
            ),
            pt("PU", "，"),
            node(
                "IP",
                vec![
                    node("NP", vec![pt("NN", "净重")]),
                    node("NP", vec![pt("NT", "354克")]),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    tree.validate().expect("smuggling tree");
    (tree, graph)
}

/// Hand-derived expectation for one action record.
pub struct Expected {
    pub subject: &'static [&'static str],
    pub trigger: &'static str,
    pub object: &'static [&'static str],
    pub modifiers: &'static [&'static str],
    pub inherited: bool,
}

struct Fixture {
    name: &'static str,
    parse: (ConstituencyTree, DependencyGraph),
    expected: Vec<Expected>,
}

fn exp(
    subject: &'static [&'static str],
    trigger: &'static str,
    object: &'static [&'static str],
    modifiers: &'static [&'static str],
    inherited: bool,
) -> Expected {
    Expected {
        subject,
        trigger,
        object,
        modifiers,
        inherited,
    }
}

fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();

    out.push(Fixture {
        name: "red pocket",
        parse: red_pocket(),
        expected: vec![exp(
            &["被告人"],
            "接收",
            &["手机微信红包"],
            &["当面"],
            false,
        )],
    });

    out.push(Fixture {
        name: "smuggling flowing sentence",
        parse: smuggling(),
        expected: vec![
            exp(&["李xx"], "藏匿", &["毒品"], &[], false),
            exp(&["李xx"], "走私", &[], &[], true),
            exp(&["李xx"], "入境", &[], &[], true),
            exp(&["李xx"], "查获", &[], &[], true),
            exp(&["李xx"], "供述", &[], &["如实"], false),
            exp(&["李xx"], "藏匿", &["毒品"], &[], true),
            exp(&["执勤人员"], "收缴", &["毒品可疑物59坨"], &[], false),
        ],
    });

    // 把-construction: the marked nominal becomes the object.
    let ba_tokens = vec![
        t("张某", "PROPN", "NR"),
        t("把", "AUX", "BA"),
        t("赃物", "NOUN", "NN"),
        t("变卖", "VERB", "VV"),
        t("。", "PUNCT", "PU"),
    ];
    let ba_graph = DependencyGraph::new(
        ba_tokens,
        vec![
            edge(3, 0, "nsubj"),
            edge(3, 1, "aux"),
            edge(3, 2, "obj"),
            edge(3, 4, "punct"),
        ],
        3,
    );
    let ba_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NR", "张某")]),
            node(
                "VP",
                vec![
                    pt("BA", "把"),
                    node("NP", vec![pt("NN", "赃物")]),
                    node("VP", vec![pt("VV", "变卖")]),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "ba construction",
        parse: (ba_tree, ba_graph),
        expected: vec![exp(&["张某"], "变卖", &["赃物"], &[], false)],
    });

    // 将-construction behaves the same way.
    let jiang_tokens = vec![
        t("李某", "PROPN", "NR"),
        t("将", "AUX", "BA"),
        t("赃款", "NOUN", "NN"),
        t("转移", "VERB", "VV"),
        t("。", "PUNCT", "PU"),
    ];
    let jiang_graph = DependencyGraph::new(
        jiang_tokens,
        vec![
            edge(3, 0, "nsubj"),
            edge(3, 1, "aux"),
            edge(3, 2, "obj"),
            edge(3, 4, "punct"),
        ],
        3,
    );
    let jiang_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NR", "李某")]),
            node(
                "VP",
                vec![
                    pt("BA", "将"),
                    node("NP", vec![pt("NN", "赃款")]),
                    node("VP", vec![pt("VV", "转移")]),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "jiang construction",
        parse: (jiang_tree, jiang_graph),
        expected: vec![exp(&["李某"], "转移", &["赃款"], &[], false)],
    });

    // 被-construction: object comes from the passive nominal subject; the
    // plain subject is absent and there is nothing to inherit.
    let bei_tokens = vec![
        t("张某", "PROPN", "NR"),
        t("被", "AUX", "BB"),
        t("警察", "NOUN", "NN"),
        t("逮捕", "VERB", "VV"),
        t("。", "PUNCT", "PU"),
    ];
    let bei_graph = DependencyGraph::new(
        bei_tokens,
        vec![
            edge(3, 0, "nsubj:pass"),
            edge(3, 1, "aux:pass"),
            edge(3, 2, "obl:agent"),
            edge(3, 4, "punct"),
        ],
        3,
    );
    let bei_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NR", "张某")]),
            node(
                "VP",
                vec![
                    pt("SB", "被"),
                    node("NP", vec![pt("NN", "警察")]),
                    node("VP", vec![pt("VV", "逮捕")]),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "bei construction",
        parse: (bei_tree, bei_graph),
        expected: vec![exp(&[], "逮捕", &["张某"], &[], true)],
    });

    // Conjunct rule: the second verb only qualifies through rule two, and
    // may not inherit a subject from within its own clause.
    let conj_tokens = vec![
        t("王某", "PROPN", "NR"),
        t("逃逸", "VERB", "VV"),
        t("并", "ADV", "AD"),
        t("投案", "VERB", "VV"),
        t("。", "PUNCT", "PU"),
    ];
    let conj_graph = DependencyGraph::new(
        conj_tokens,
        vec![
            edge(1, 0, "nsubj"),
            edge(3, 2, "advmod"),
            edge(1, 3, "conj"),
            edge(1, 4, "punct"),
        ],
        1,
    );
    let conj_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NR", "王某")]),
            node(
                "VP",
                vec![
                    pt("VV", "逃逸"),
                    node("ADVP", vec![pt("AD", "并")]),
                    node("NP", vec![pt("VV", "投案")]),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "conjunct rule two",
        parse: (conj_tree, conj_graph),
        expected: vec![
            exp(&["王某"], "逃逸", &[], &[], false),
            exp(&[], "投案", &[], &[], true),
        ],
    });

    // Excluded adverbs are dropped, others kept.
    let adv_tokens = vec![
        t("赵某", "PROPN", "NR"),
        t("遂", "ADV", "AD"),
        t("多次", "ADV", "AD"),
        t("挥拳", "VERB", "VV"),
        t("。", "PUNCT", "PU"),
    ];
    let adv_graph = DependencyGraph::new(
        adv_tokens,
        vec![
            edge(3, 0, "nsubj"),
            edge(3, 1, "advmod"),
            edge(3, 2, "advmod"),
            edge(3, 4, "punct"),
        ],
        3,
    );
    let adv_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NR", "赵某")]),
            node(
                "VP",
                vec![
                    node("ADVP", vec![pt("AD", "遂")]),
                    node("ADVP", vec![pt("AD", "多次")]),
                    node("VP", vec![pt("VV", "挥拳")]),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "modifier exclusion",
        parse: (adv_tree, adv_graph),
        expected: vec![exp(&["赵某"], "挥拳", &[], &["多次"], false)],
    });

    // Inheritance across clauses, cue clause first.
    let inh_tokens = vec![
        t("经审理查明", "ADV", "AD"),
        t("，", "PUNCT", "PU"),
        t("张某", "PROPN", "NR"),
        t("殴打", "VERB", "VV"),
        t("李四", "PROPN", "NR"),
        t("，", "PUNCT", "PU"),
        t("逃逸", "VERB", "VV"),
        t("，", "PUNCT", "PU"),
        t("赔偿", "VERB", "VV"),
        t("损失", "NOUN", "NN"),
        t("。", "PUNCT", "PU"),
    ];
    let inh_graph = DependencyGraph::new(
        inh_tokens,
        vec![
            edge(3, 0, "advmod"),
            edge(0, 1, "punct"),
            edge(3, 2, "nsubj"),
            edge(3, 4, "obj"),
            edge(3, 5, "punct"),
            edge(3, 6, "conj"),
            edge(6, 7, "punct"),
            edge(3, 8, "conj"),
            edge(8, 9, "obj"),
            edge(8, 10, "punct"),
        ],
        3,
    );
    let inh_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("ADVP", vec![pt("AD", "经审理查明")]),
            pt("PU", "，"),
            node(
                "IP",
                vec![
                    node("NP", vec![pt("NR", "张某")]),
                    node("VP", vec![pt("VV", "殴打"), node("NP", vec![pt("NR", "李四")])]),
                ],
            ),
            pt("PU", "，"),
            node("IP", vec![node("VP", vec![pt("VV", "逃逸")])]),
            pt("PU", "，"),
            node(
                "IP",
                vec![node(
                    "VP",
                    vec![pt("VV", "赔偿"), node("NP", vec![pt("NN", "损失")])],
                )],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "subject inheritance chain",
        parse: (inh_tree, inh_graph),
        expected: vec![
            exp(&["张某"], "殴打", &["李四"], &[], false),
            exp(&["张某"], "逃逸", &[], &[], true),
            exp(&["张某"], "赔偿", &["损失"], &[], true),
        ],
    });

    // Clausal complement inside one clause.
    let ccomp_tokens = vec![
        t("李某", "PROPN", "NR"),
        t("供述", "VERB", "VV"),
        t("窃取", "VERB", "VV"),
        t("财物", "NOUN", "NN"),
        t("。", "PUNCT", "PU"),
    ];
    let ccomp_graph = DependencyGraph::new(
        ccomp_tokens,
        vec![
            edge(1, 0, "nsubj"),
            edge(1, 2, "ccomp"),
            edge(2, 3, "obj"),
            edge(1, 4, "punct"),
        ],
        1,
    );
    let ccomp_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NR", "李某")]),
            node(
                "VP",
                vec![
                    pt("VV", "供述"),
                    node(
                        "IP",
                        vec![node(
                            "VP",
                            vec![pt("VV", "窃取"), node("NP", vec![pt("NN", "财物")])],
                        )],
                    ),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "clausal complement",
        parse: (ccomp_tree, ccomp_graph),
        expected: vec![
            exp(&["李某"], "供述", &[], &[], false),
            exp(&[], "窃取", &["财物"], &[], true),
        ],
    });

    // A verbless time clause followed by an ordinary action clause.
    let time_tokens = vec![
        t("案发后", "NOUN", "NT"),
        t("，", "PUNCT", "PU"),
        t("双方", "NOUN", "NN"),
        t("已经", "ADV", "AD"),
        t("和解", "VERB", "VV"),
        t("。", "PUNCT", "PU"),
    ];
    let time_graph = DependencyGraph::new(
        time_tokens,
        vec![
            edge(4, 0, "obl:tmod"),
            edge(0, 1, "punct"),
            edge(4, 2, "nsubj"),
            edge(4, 3, "advmod"),
            edge(4, 5, "punct"),
        ],
        4,
    );
    let time_tree = ConstituencyTree::new(node(
        "IP",
        vec![
            node("NP", vec![pt("NT", "案发后")]),
            pt("PU", "，"),
            node(
                "IP",
                vec![
                    node("NP", vec![pt("NN", "双方")]),
                    node(
                        "VP",
                        vec![
                            node("ADVP", vec![pt("AD", "已经")]),
                            node("VP", vec![pt("VV", "和解")]),
                        ],
                    ),
                ],
            ),
            pt("PU", "。"),
        ],
    ));
    out.push(Fixture {
        name: "verbless clause then action",
        parse: (time_tree, time_graph),
        expected: vec![exp(&["双方"], "和解", &[], &["已经"], false)],
    });

    out
}

/// Runs every fixture through the full record extraction path and checks
/// the hand-derived expectations. Returns the total clause count covered.
pub fn run_conformance_fixtures() -> usize {
    let config = EngineConfig::default();
    let mut total_douduan = 0usize;
    for (index, fixture) in fixtures().into_iter().enumerate() {
        let (tree, graph) = fixture.parse;
        tree.check_alignment(&graph)
            .unwrap_or_else(|e| panic!("{}: {e}", fixture.name));
        let text: String = graph.tokens.iter().map(|t| t.form.as_str()).collect();
        let mut record = JddRecord::new(format!("fixture-{index}"), CaseType::Criminal);
        record.fact_sentences.push(ClassifiedSentence::bare(text));
        let mut parses = ParseSet::new();
        parses.insert(0, SentenceParse { graph, tree });
        let mut diags = Vec::new();
        let out = extract_record(record, &parses, &config, &mut diags)
            .unwrap_or_else(|e| panic!("{}: {e}", fixture.name));
        total_douduan += out.fact_sentences[0].douduan.len();
        assert_eq!(
            out.actions.len(),
            fixture.expected.len(),
            "{}: action count; got {:?}",
            fixture.name,
            out.actions
        );
        for (action, expected) in out.actions.iter().zip(&fixture.expected) {
            assert_eq!(action.trigger, expected.trigger, "{}", fixture.name);
            assert_eq!(
                action.subject,
                expected.subject.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "{}: subject of {}",
                fixture.name,
                expected.trigger
            );
            assert_eq!(
                action.object,
                expected.object.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "{}: object of {}",
                fixture.name,
                expected.trigger
            );
            assert_eq!(
                action.action_modifier,
                expected
                    .modifiers
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>(),
                "{}: modifiers of {}",
                fixture.name,
                expected.trigger
            );
            assert_eq!(
                action.subject_inherited, expected.inherited,
                "{}: inheritance flag of {}",
                fixture.name, expected.trigger
            );
        }
    }
    total_douduan
}
