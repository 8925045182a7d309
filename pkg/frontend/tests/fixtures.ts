/**
 * Recorded API payloads, captured verbatim from the backing service.
 * Tests replay these through a fake fetch so the DOM can be compared
 * field by field against what the server actually sent.
 */


import type {
  CardDoc,
  JobDoc,
  ModelDoc,
  SessionDoc,
} from "../src/types";

export const MODEL: ModelDoc = {
  "constraints": [
    "(FullyAutomated IMPLIES ContentModeration)"
  ],
  "features": [
    {
      "id": "Cart",
      "kind": "classic",
      "name": "Cart",
      "quality_profile_ref": null
    },
    {
      "id": "Catalog",
      "kind": "classic",
      "name": "Catalog",
      "quality_profile_ref": null
    },
    {
      "id": "ContentModeration",
      "kind": "ml_based",
      "name": "ContentModeration",
      "quality_profile_ref": "fqp_moderation"
    },
    {
      "id": "FraudDetection",
      "kind": "ml_based",
      "name": "FraudDetection",
      "quality_profile_ref": "fqp_fraud"
    },
    {
      "id": "FullyAutomated",
      "kind": "classic",
      "name": "FullyAutomated",
      "quality_profile_ref": null
    },
    {
      "id": "HumanAssisted",
      "kind": "classic",
      "name": "HumanAssisted",
      "quality_profile_ref": null
    },
    {
      "id": "Moderation",
      "kind": "classic",
      "name": "Moderation",
      "quality_profile_ref": null
    },
    {
      "id": "Payment",
      "kind": "classic",
      "name": "Payment",
      "quality_profile_ref": null
    },
    {
      "id": "SentimentAnalysis",
      "kind": "ml_based",
      "name": "SentimentAnalysis",
      "quality_profile_ref": "fqp_sentiment"
    },
    {
      "id": "Store",
      "kind": "classic",
      "name": "Store",
      "quality_profile_ref": null
    }
  ],
  "groups": [
    {
      "cardinality": [
        3,
        3
      ],
      "kind": "mandatory",
      "members": [
        "Catalog",
        "Cart",
        "Payment"
      ],
      "parent": "Store"
    },
    {
      "cardinality": [
        0,
        1
      ],
      "kind": "optional",
      "members": [
        "FraudDetection"
      ],
      "parent": "Store"
    },
    {
      "cardinality": [
        0,
        1
      ],
      "kind": "optional",
      "members": [
        "SentimentAnalysis"
      ],
      "parent": "Store"
    },
    {
      "cardinality": [
        0,
        1
      ],
      "kind": "optional",
      "members": [
        "ContentModeration"
      ],
      "parent": "Store"
    },
    {
      "cardinality": [
        1,
        1
      ],
      "kind": "xor_group",
      "members": [
        "HumanAssisted",
        "FullyAutomated"
      ],
      "parent": "Moderation"
    },
    {
      "cardinality": [
        0,
        1
      ],
      "kind": "optional",
      "members": [
        "Moderation"
      ],
      "parent": "Store"
    }
  ],
  "profiles": [
    {
      "feature_id": "fqp_fraud",
      "feature_type": "ML-based",
      "ml_component_id": "fraud_detection_V1.0",
      "quality_distribution": {
        "accuracy_range": [
          0.88,
          0.95
        ],
        "confidence_intervals": {
          "high_confidence": [
            0.85,
            1.0
          ],
          "low_confidence": [
            0.0,
            0.69
          ],
          "medium_confidence": [
            0.7,
            0.84
          ]
        },
        "context_sensitivity": {
          "domestic_transactions_during_week": 0.95,
          "domestic_transactions_during_weekend": 0.9,
          "international_transactions_during_week": 0.88,
          "international_transactions_during_weekend": 0.75,
          "transactions_from_suspicious_IP": 0.98,
          "transactions_less_than_10_USD": 0.7
        }
      }
    },
    {
      "feature_id": "fqp_moderation",
      "feature_type": "ML-based",
      "ml_component_id": "content_moderation_V1.0",
      "quality_distribution": {
        "accuracy_range": [
          0.8,
          0.92
        ],
        "confidence_intervals": {
          "high_confidence": [
            0.85,
            1.0
          ],
          "low_confidence": [
            0.0,
            0.59
          ],
          "medium_confidence": [
            0.6,
            0.84
          ]
        },
        "context_sensitivity": {
          "image_captions": 0.81,
          "text_posts": 0.92
        }
      }
    },
    {
      "feature_id": "fqp_sentiment",
      "feature_type": "ML-based",
      "ml_component_id": "tc_001",
      "quality_distribution": {
        "accuracy_range": [
          0.85,
          0.93
        ],
        "confidence_intervals": {
          "high_confidence": [
            0.85,
            1.0
          ],
          "low_confidence": [
            0.0,
            0.69
          ],
          "medium_confidence": [
            0.7,
            0.84
          ]
        },
        "context_sensitivity": {
          "product_reviews": 0.93,
          "short_comments": 0.86
        }
      }
    }
  ],
  "root": "Store"
};

export const CARDS: CardDoc[] = [
  {
    "caveats": [
      "The model is vulnerable to producing biased predictions affecting underrepresented groups. For instance, when evaluating sentences such as 'This film was filmed in COUNTRY,' the model assigns drastically different probabilities to the positive label based on the country mentioned (e.g., a 0.89 probability for France versus 0.08 for Afghanistan)."
    ],
    "intended_use": {
      "out_of_scope_use": "The model was not trained to be factual or true representations of people",
      "primary_use": "The model can be used for topic classification"
    },
    "model_details": {
      "developed_by": "Hugging Face",
      "license": "Apache-2.0",
      "model_id": "tc_001",
      "model_type": "Text Classification",
      "version": 2
    },
    "model_usage": {
      "api_endpoint": "https://plapplication.com/sentimentAnalisys1/predict",
      "deployment_guidance": "http://huggingface.co/distilbert/distilbert-base-uncased"
    },
    "operational_requirements": {
      "cpu": "2+ CPU Cores",
      "gpu": "Optional",
      "notes": "Although the GPU is optional, its inclusion can significantly improve performance for some scenarios",
      "ram": "4GB"
    },
    "performance_metrics": {
      "Accuracy": 91.3
    },
    "spl_reusability_profile": {
      "integration_complexity": "Low",
      "supported_domains": [
        "Movies",
        "Series",
        "Music",
        "Products"
      ]
    }
  }
];

export const SESSION_INITIAL: SessionDoc = {
  "decisions": {},
  "session_id": "s1",
  "state": {
    "consistent": true,
    "decided_false": [],
    "decided_true": [],
    "forced_false": [],
    "forced_true": [
      "Cart",
      "Catalog",
      "Payment",
      "Store"
    ],
    "open": [
      "ContentModeration",
      "FraudDetection",
      "FullyAutomated",
      "HumanAssisted",
      "Moderation",
      "SentimentAnalysis"
    ]
  }
};

export const DECISION_FULLY_AUTOMATED: SessionDoc = {
  "decisions": {
    "FullyAutomated": true
  },
  "session_id": "s1",
  "state": {
    "consistent": true,
    "decided_false": [],
    "decided_true": [
      "FullyAutomated"
    ],
    "forced_false": [
      "HumanAssisted"
    ],
    "forced_true": [
      "Cart",
      "Catalog",
      "ContentModeration",
      "Moderation",
      "Payment",
      "Store"
    ],
    "open": [
      "FraudDetection",
      "SentimentAnalysis"
    ]
  }
};

export const CONFLICT_STATUS = 409;

export const CONFLICT_BODY: { detail: string } = {
  "detail": "decision HumanAssisted=True is inconsistent with the model"
};

export const RETRACT_FULLY_AUTOMATED: SessionDoc = {
  "decisions": {},
  "session_id": "s1",
  "state": {
    "consistent": true,
    "decided_false": [],
    "decided_true": [],
    "forced_false": [],
    "forced_true": [
      "Cart",
      "Catalog",
      "Payment",
      "Store"
    ],
    "open": [
      "ContentModeration",
      "FraudDetection",
      "FullyAutomated",
      "HumanAssisted",
      "Moderation",
      "SentimentAnalysis"
    ]
  }
};

export const JOB_DONE: Required<Pick<JobDoc, "result">> & JobDoc = {
  "job_id": "j2",
  "result": [
    {
      "bindings": {},
      "objectives": {
        "senses": [
          "maximize",
          "minimize",
          "minimize"
        ],
        "values": [
          1.0,
          0.0,
          0.0
        ]
      },
      "selection": [
        "Cart",
        "Catalog",
        "Payment",
        "Store"
      ]
    }
  ],
  "status": "done"
};

export const JOB_DONE_MULTI: Required<Pick<JobDoc, "result">> & JobDoc = {
  "job_id": "j1",
  "result": [
    {
      "bindings": {
        "SentimentAnalysis": {
          "id": "big_accurate",
          "reason": "selected by optimizer",
          "type": "ml_model"
        }
      },
      "objectives": {
        "senses": [
          "maximize",
          "minimize",
          "minimize"
        ],
        "values": [
          0.97,
          12.0,
          3.0
        ]
      },
      "selection": [
        "Cart",
        "Catalog",
        "Payment",
        "SentimentAnalysis",
        "Store"
      ]
    },
    {
      "bindings": {
        "SentimentAnalysis": {
          "id": "small_fast",
          "reason": "selected by optimizer",
          "type": "ml_model"
        }
      },
      "objectives": {
        "senses": [
          "maximize",
          "minimize",
          "minimize"
        ],
        "values": [
          0.85,
          1.0,
          1.0
        ]
      },
      "selection": [
        "Cart",
        "Catalog",
        "Payment",
        "SentimentAnalysis",
        "Store"
      ]
    },
    {
      "bindings": {
        "SentimentAnalysis": {
          "id": "tc_001",
          "reason": "selected by optimizer",
          "type": "ml_model"
        }
      },
      "objectives": {
        "senses": [
          "maximize",
          "minimize",
          "minimize"
        ],
        "values": [
          0.9129999999999999,
          4.0,
          1.0
        ]
      },
      "selection": [
        "Cart",
        "Catalog",
        "Payment",
        "SentimentAnalysis",
        "Store"
      ]
    }
  ],
  "status": "done"
};

export const ADOPT_REPLAY: Array<{
  feature: string;
  value: boolean;
  status: number;
  body: SessionDoc;
}> = [
  {
    "feature": "Cart",
    "value": true,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [],
        "decided_true": [
          "Cart"
        ],
        "forced_false": [],
        "forced_true": [
          "Catalog",
          "Payment",
          "Store"
        ],
        "open": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated",
          "HumanAssisted",
          "Moderation",
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "Catalog",
    "value": true,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [],
        "decided_true": [
          "Cart",
          "Catalog"
        ],
        "forced_false": [],
        "forced_true": [
          "Payment",
          "Store"
        ],
        "open": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated",
          "HumanAssisted",
          "Moderation",
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "ContentModeration",
    "value": false,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration"
        ],
        "decided_true": [
          "Cart",
          "Catalog"
        ],
        "forced_false": [
          "FullyAutomated"
        ],
        "forced_true": [
          "Payment",
          "Store"
        ],
        "open": [
          "FraudDetection",
          "HumanAssisted",
          "Moderation",
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "FraudDetection",
    "value": false,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false,
        "FraudDetection": false
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration",
          "FraudDetection"
        ],
        "decided_true": [
          "Cart",
          "Catalog"
        ],
        "forced_false": [
          "FullyAutomated"
        ],
        "forced_true": [
          "Payment",
          "Store"
        ],
        "open": [
          "HumanAssisted",
          "Moderation",
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "FullyAutomated",
    "value": false,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false,
        "FraudDetection": false,
        "FullyAutomated": false
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated"
        ],
        "decided_true": [
          "Cart",
          "Catalog"
        ],
        "forced_false": [],
        "forced_true": [
          "Payment",
          "Store"
        ],
        "open": [
          "HumanAssisted",
          "Moderation",
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "HumanAssisted",
    "value": false,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false,
        "FraudDetection": false,
        "FullyAutomated": false,
        "HumanAssisted": false
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated",
          "HumanAssisted"
        ],
        "decided_true": [
          "Cart",
          "Catalog"
        ],
        "forced_false": [
          "Moderation"
        ],
        "forced_true": [
          "Payment",
          "Store"
        ],
        "open": [
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "Moderation",
    "value": false,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false,
        "FraudDetection": false,
        "FullyAutomated": false,
        "HumanAssisted": false,
        "Moderation": false
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated",
          "HumanAssisted",
          "Moderation"
        ],
        "decided_true": [
          "Cart",
          "Catalog"
        ],
        "forced_false": [],
        "forced_true": [
          "Payment",
          "Store"
        ],
        "open": [
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "Payment",
    "value": true,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false,
        "FraudDetection": false,
        "FullyAutomated": false,
        "HumanAssisted": false,
        "Moderation": false,
        "Payment": true
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated",
          "HumanAssisted",
          "Moderation"
        ],
        "decided_true": [
          "Cart",
          "Catalog",
          "Payment"
        ],
        "forced_false": [],
        "forced_true": [
          "Store"
        ],
        "open": [
          "SentimentAnalysis"
        ]
      }
    }
  },
  {
    "feature": "SentimentAnalysis",
    "value": false,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false,
        "FraudDetection": false,
        "FullyAutomated": false,
        "HumanAssisted": false,
        "Moderation": false,
        "Payment": true,
        "SentimentAnalysis": false
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated",
          "HumanAssisted",
          "Moderation",
          "SentimentAnalysis"
        ],
        "decided_true": [
          "Cart",
          "Catalog",
          "Payment"
        ],
        "forced_false": [],
        "forced_true": [
          "Store"
        ],
        "open": []
      }
    }
  },
  {
    "feature": "Store",
    "value": true,
    "status": 200,
    "body": {
      "decisions": {
        "Cart": true,
        "Catalog": true,
        "ContentModeration": false,
        "FraudDetection": false,
        "FullyAutomated": false,
        "HumanAssisted": false,
        "Moderation": false,
        "Payment": true,
        "SentimentAnalysis": false,
        "Store": true
      },
      "session_id": "s3",
      "state": {
        "consistent": true,
        "decided_false": [
          "ContentModeration",
          "FraudDetection",
          "FullyAutomated",
          "HumanAssisted",
          "Moderation",
          "SentimentAnalysis"
        ],
        "decided_true": [
          "Cart",
          "Catalog",
          "Payment",
          "Store"
        ],
        "forced_false": [],
        "forced_true": [],
        "open": []
      }
    }
  }
];

export const ADOPT_FINAL: SessionDoc = {
  "decisions": {
    "Cart": true,
    "Catalog": true,
    "ContentModeration": false,
    "FraudDetection": false,
    "FullyAutomated": false,
    "HumanAssisted": false,
    "Moderation": false,
    "Payment": true,
    "SentimentAnalysis": false,
    "Store": true
  },
  "session_id": "s3",
  "state": {
    "consistent": true,
    "decided_false": [
      "ContentModeration",
      "FraudDetection",
      "FullyAutomated",
      "HumanAssisted",
      "Moderation",
      "SentimentAnalysis"
    ],
    "decided_true": [
      "Cart",
      "Catalog",
      "Payment",
      "Store"
    ],
    "forced_false": [],
    "forced_true": [],
    "open": []
  }
};
