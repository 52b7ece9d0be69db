#include "bltrend/rubric.hpp"

namespace bltrend {

// Shipped rubric document; identical to rubrics/bitter_lesson_v1.json.
extern const char* const kBuiltinRubricJson;
const char* const kBuiltinRubricJson = R"json({
  "version": "bitter-lesson-v1",
  "scale": {
    "min": 0,
    "max": 10
  },
  "prompt_template": "Title: {title}\nAbstract: {abstract}\n\nWe want to evalute this abstract in terms of alignment with \"The Bitter Lesson\". The main idea of Rich Sutton's \"The Bitter Lesson\" is that the most effective AI approaches in the long run are those that leverage computation and general-purpose methods like search and learning, rather than human-designed systems that try to build in human knowledge. Evaluate the alignment of the abstract with the following principles, assigning a score from 0 to 10 for each.",
  "score_fields": {
    "explanation": "An explanation for the given score",
    "score": "A score from 0 to 10"
  },
  "dimensions": {
    "learning_over_engineering": {
      "description": "**Learning Over Engineering**: To what extent does the idea prioritize leveraging computation through data-driven learning and statistical methods (e.g., machine learning, deep learning, neural networks, probabilistic models, unsupervised learning, supervised learning, reinforcement learning, generative models, discriminative models, ensemble methods, online learning, active learning, semi-supervised learning) over relying on human-engineered knowledge, heuristics, and domain expertise (e.g., hand-crafted features, rule-based systems, expert systems, symbolic AI, knowledge representation, logic programming, constraint satisfaction)?",
      "anchors": {
        "0": "Completely relies on human engineering",
        "5": "Equal emphasis on learning and engineering",
        "10": "Completely prioritizes learning from data"
      }
    },
    "search_over_heuristics": {
      "description": "**Search over Heuristics**: To what degree does the idea emphasize leveraging computation through search algorithms (e.g., gradient descent, stochastic gradient descent, evolutionary algorithms, genetic algorithms, simulated annealing, Monte Carlo methods, Markov chain Monte Carlo, beam search, branch and bound, A* search, heuristic search) and optimization techniques (e.g., convex optimization, stochastic optimization, combinatorial optimization, integer programming, quadratic programming, linear programming, non-linear optimization, multi-objective optimization), rather than depending on human-designed heuristics and problem-specific strategies (e.g., hand-tuned parameters, domain-specific rules, expert knowledge, case-based reasoning, heuristic functions)?",
      "anchors": {
        "0": "Completely relies on human-designed heuristics",
        "5": "Equal emphasis on search and heuristics",
        "10": "Completely prioritizes search and optimization"
      }
    },
    "scalability_with_computation": {
      "description": "**Scalability with Computation**:To what extent is the idea based on methods that can continuously scale and improve performance as the available computational resources (e.g., processing power, memory, storage, data, distributed computing, cloud computing, GPU acceleration, TPU acceleration, high-performance computing, edge computing, quantum computing) increase, taking full advantage of the exponential growth in computing capabilities (e.g., Moore's Law, Dennard scaling, Amdahl's Law, Gustafson's Law)?",
      "anchors": {
        "0": "Does not scale with computation at all",
        "5": "Scales moderately with computation",
        "10": "Scales exceptionally well with computation"
      }
    },
    "generality_over_specificity": {
      "description": "**Generality over Specificity**:To what degree does the approach emphasize general, flexible, and adaptable methods that can learn and capture arbitrary complexity from data (e.g., deep learning, transfer learning, meta-learning, representation learning, multi-task learning, few-shot learning, zero-shot learning, self-supervised learning, unsupervised pre-training, domain adaptation, continual learning, lifelong learning, incremental learning) rather than attempting to build in complex and detailed models of the world through manual engineering and domain-specific knowledge (e.g., hand-designed features, domain-specific ontologies, knowledge graphs, expert systems, rule-based systems, symbolic representations, logic-based representations)?",
      "anchors": {
        "0": "Completely domain-specific and manually engineered",
        "5": "Balance of generality and specificity",
        "10": "Maximally general, flexible and adaptable"
      }
    },
    "favoring_fundamental_principles": {
      "description": "**Favoring Fundamental Principles**: To what extent does the approach adhere to fundamental principles of computation, mathematics, and information theory (e.g., algorithmic efficiency, computational complexity, statistical learning theory, information entropy, Bayesian inference, Kolmogorov complexity, Occam's razor, Minimum Description Length, PAC learning, VC dimension, Rademacher complexity, concentration inequalities, regularization, sparsity, smoothness, stability, convergence, consistency) rather than focusing on emulating the specific details of human cognition or biological intelligence (e.g., neuroscience-inspired architectures, cognitive architectures, embodied cognition, situated cognition, enactivism, dynamical systems theory, ecological psychology)?",
      "anchors": {
        "0": "Completely focused on emulating human/biological details",
        "5": "Equal focus on principles and human/biological details",
        "10": "Completely grounded in fundamental principles"
      }
    }
  }
}
)json";

}  // namespace bltrend
