# Reference prompt templates in their original Python form; writes the golden files under goldens/.
def build_prompt1(vocab, target_label):
    label_space = vocab
    prompt = "Use the following vocabulary to respond to the questions: " + \
           f"{' '.join(label_space)}\n" + \
           f"Question: what usually happens after earthquake?\n" +\
           f"Answer: tsunami\n" + \
           f"Question: what usually happens after economic crises?\n" +\
           f"Answer: unemployment\n" + \
           f"Question: what usually happens after bomb attack?\n" +\
           f"Answer: injury\n" + \
           f"Question: what usually happens after {target_label}?\n" +\
           f"Answer:"
    return prompt

def build_prompt2(vocab, target_labels):
    label_space = vocab
    prompt = "Use the following vocabulary to respond to the questions: " + \
           f"{' '.join(label_space)}\n" + \
           f"Question: what usually happens after earthquake?\n" +\
           f"Answer: tsunami\n" + \
           f"Question: what usually happens after earthquake and tsunami?\n" +\
           f"Answer: nuclear disaster\n" + \
           f"Question: what usually happens after economic crises and wage decline and unemployment?\n" +\
           f"Answer: legislation\n" + \
           f"Question: what usually happens after military conflict?\n" +\
           f"Answer: war\n" + \
           f"Question: what usually happens after military conflict and war?\n" +\
           f"Answer: peace treaty\n" + \
           f"Question: what usually happens after {' and '.join(target_labels)}?\n" +\
           f"Answer:"
    return prompt

def build_precision_eval(trigger, consequence):
    prompt = "Respond to the questions below with a (YES/NO) with a historical example:" + \
            f"Question: Can economic crises cause a landslide?\n" +\
            f"Answer: NO. There is no historical example of an economic crisis causing a landslide, which is natural disaster.\n" + \
            f"Question: Can earthquake cause a tsunami?\n" +\
            f"Answer: YES. In 2011, Japan experienced an earthquake in tohoku that caused a tsunami. \n" + \
            f"Question: Can mass shooting cause a condensation cloud?\n" +\
            f"Answer: NO. A condensation cloud is a weather phenomenon, not a mass shooting.\n" + \
            f"Question: Can accident cause a stock market crash?\n" +\
            f"Answer: NO. The stock market crash of 1929 was caused by a series of events, not an accident.\n" + \
            f"Question: Can disease outbreak cause a inventory shrinkage?\n" +\
            f"Answer: YES. The bubonic plague outbreak in Europe in 1348 caused a massive inventory shrinkage.\n" + \
            f"Question: Can fraud cause a travel ban?\n" +\
            f"Answer: YES. Travel bans are a form of punishment for immigration fraud.\n" + \
            f"Question: Can {trigger} cause a {consequence}?\n" + "Answer: "
    return prompt

vocab = ["war", "famine"]
out = {
  "trigger_war_famine__earthquake.txt": build_prompt1(vocab, "earthquake"),
  "iterative_war_famine__earthquake_tsunami.txt": build_prompt2(vocab, ["earthquake", "tsunami"]),
  "iterative_war_famine__earthquake.txt": build_prompt2(vocab, ["earthquake"]),
  "precision__earthquake__tsunami.txt": build_precision_eval("earthquake", "tsunami"),
  "precision__famine__famine.txt": build_precision_eval("famine", "famine"),
}
import os
os.chdir(os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "goldens"))
for name, text in out.items():
    with open(name, "w", newline="\n") as f:
        f.write(text)
